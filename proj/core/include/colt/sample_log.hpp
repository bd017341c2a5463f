#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "colt/config.hpp"
#include "colt/search.hpp"

namespace colt {

/// samples.log: "# key=value" metadata lines, one tab-separated header row, then
/// one row per sample. Doubles are written in shortest round-trip form, so reading
/// a log back reproduces every record exactly.
void write_sample_log_header(std::ostream& out, const Metadata& metadata);
void write_sample_row(std::ostream& out, const SampleRecord& record);
void write_sample_log(std::ostream& out, const Metadata& metadata,
                      std::span<const SampleRecord> samples);

struct SampleLog {
  Metadata metadata;
  std::vector<SampleRecord> samples;
};

/// Throws Error on malformed input.
SampleLog read_sample_log(std::istream& in);

}  // namespace colt
