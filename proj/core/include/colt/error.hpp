#pragma once

#include <stdexcept>
#include <string>

namespace colt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A transformation was applied to a program whose trace is already at the horizon.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

/// A transformation that is not applicable in the given program state.
class InvalidMutator : public Error {
 public:
  using Error::Error;
};

class UnknownModel : public Error {
 public:
  using Error::Error;
};

class OracleBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class EmptyChildren : public Error {
 public:
  using Error::Error;
};

class BranchingFull : public Error {
 public:
  using Error::Error;
};

/// A remote proposer could not be reached after the retry policy was exhausted.
class ProposerUnavailable : public Error {
 public:
  using Error::Error;
};

/// No usable JSON object (or no assistant text) could be extracted from a response.
class UnparseableResponse : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ZeroSamples : public Error {
 public:
  using Error::Error;
};

class ZeroCalls : public Error {
 public:
  using Error::Error;
};

}  // namespace colt
