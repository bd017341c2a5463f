#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "colt/proposer.hpp"

namespace colt {

inline constexpr const char* kApiTokenEnv = "COLT_API_TOKEN";

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;

  /// Delay before attempt `attempt` (1-based, so attempt 2 waits initial_backoff).
  [[nodiscard]] std::chrono::milliseconds backoff_before(int attempt) const;
};

/// A chat-completion style HTTP endpoint.
struct RemoteEndpoint {
  std::string url;         // http[s]://host[:port]/path
  std::string model_name;  // value of the "model" field in the request body
  std::string response_pointer = "/choices/0/message/content";  // JSON pointer to the text
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
};

struct ParsedUrl {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string path;
};

/// Throws ConfigError on anything other than http(s)://host[:port][/path].
ParsedUrl parse_url(const std::string& url);

/// Reads the bearer token from COLT_API_TOKEN; throws ConfigError when unset or empty.
std::string api_token_from_env();

using SleepFn = std::function<void(std::chrono::milliseconds)>;

/// Blocking client for one endpoint. Construction validates the endpoint and token,
/// so configuration problems surface before any request is sent.
class RemoteClient {
 public:
  RemoteClient(RemoteEndpoint endpoint, std::string token, SleepFn sleep = {});

  /// POSTs {"model", "messages": [{"role": "system", "content": prompt}]} and returns
  /// the assistant text. Retries transport failures, 429 and 5xx responses.
  /// Throws ProposerUnavailable after the last attempt, UnparseableResponse when the
  /// body does not carry text at the configured pointer.
  std::string complete(const std::string& prompt);

  [[nodiscard]] const RemoteEndpoint& endpoint() const noexcept { return endpoint_; }

 private:
  RemoteEndpoint endpoint_;
  ParsedUrl url_;
  std::string token_;
  SleepFn sleep_;
};

/// Proposer backed by a remote model.
class RemoteProposer final : public Proposer {
 public:
  explicit RemoteProposer(RemoteClient client) : client_(std::move(client)) {}

  std::string respond(const ProposalRequest& request, Rng& rng) override;
  [[nodiscard]] bool uses_prompt() const override { return true; }

 private:
  RemoteClient client_;
};

/// Single-shot helper: one prompt, one raw answer.
std::string remote_propose(const RemoteEndpoint& endpoint, const std::string& prompt);

}  // namespace colt
