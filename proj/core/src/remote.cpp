#include "colt/remote.hpp"

#include <cmath>
#include <cstdlib>
#include <regex>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "colt/error.hpp"

namespace colt {

namespace {

using nlohmann::json;

bool retriable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

std::chrono::milliseconds RetryPolicy::backoff_before(int attempt) const {
  if (attempt <= 1) return std::chrono::milliseconds{0};
  const double scale = std::pow(multiplier, attempt - 2);
  return std::chrono::milliseconds{
      static_cast<std::chrono::milliseconds::rep>(static_cast<double>(initial_backoff.count()) * scale)};
}

ParsedUrl parse_url(const std::string& url) {
  static const std::regex kPattern{R"(^(https?)://([^/:]+)(?::(\d+))?(/.*)?$)"};
  std::smatch m;
  if (!std::regex_match(url, m, kPattern)) {
    throw ConfigError("endpoint URL must look like http[s]://host[:port]/path; got '" + url + "'");
  }
  ParsedUrl out;
  out.scheme = m[1].str();
  out.host = m[2].str();
  out.port = m[3].matched ? std::stoi(m[3].str()) : (out.scheme == "https" ? 443 : 80);
  out.path = m[4].matched ? m[4].str() : "/";
  return out;
}

std::string api_token_from_env() {
  const char* token = std::getenv(kApiTokenEnv);
  if (token == nullptr || *token == '\0') {
    throw ConfigError(std::string{"remote backend requires the "} + kApiTokenEnv +
                      " environment variable");
  }
  return token;
}

RemoteClient::RemoteClient(RemoteEndpoint endpoint, std::string token, SleepFn sleep)
    : endpoint_(std::move(endpoint)),
      url_(parse_url(endpoint_.url)),
      token_(std::move(token)),
      sleep_(std::move(sleep)) {
  if (endpoint_.model_name.empty()) throw ConfigError("remote backend needs a model_name");
  if (token_.empty()) throw ConfigError("remote backend needs a nonempty API token");
  if (endpoint_.retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
  try {
    [[maybe_unused]] const json::json_pointer pointer{endpoint_.response_pointer};
  } catch (const json::exception& e) {
    throw ConfigError("invalid response_pointer '" + endpoint_.response_pointer + "': " + e.what());
  }
  if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url_.scheme == "https") throw ConfigError("this build has no TLS support; use http://");
#endif
}

std::string RemoteClient::complete(const std::string& prompt) {
  const json body = {
      {"model", endpoint_.model_name},
      {"messages", json::array({{{"role", "system"}, {"content", prompt}}})},
  };
  const std::string payload = body.dump();
  const httplib::Headers headers{{"Authorization", "Bearer " + token_}};

  std::string last_failure;
  for (int attempt = 1; attempt <= endpoint_.retry.max_attempts; ++attempt) {
    if (attempt > 1) sleep_(endpoint_.retry.backoff_before(attempt));

    httplib::Client client{url_.scheme + "://" + url_.host + ":" + std::to_string(url_.port)};
    client.set_connection_timeout(endpoint_.timeout);
    client.set_read_timeout(endpoint_.timeout);
    client.set_write_timeout(endpoint_.timeout);

    auto result = client.Post(url_.path, headers, payload, "application/json");
    if (!result) {
      last_failure = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    if (retriable_status(result->status)) {
      last_failure = "HTTP " + std::to_string(result->status);
      continue;
    }
    if (result->status < 200 || result->status >= 300) {
      throw ProposerUnavailable(endpoint_.url + " rejected the request with HTTP " +
                                std::to_string(result->status));
    }

    const json response = json::parse(result->body, nullptr, false);
    if (response.is_discarded()) throw UnparseableResponse("response body is not JSON");
    const json::json_pointer pointer{endpoint_.response_pointer};
    if (!response.contains(pointer) || !response.at(pointer).is_string()) {
      throw UnparseableResponse("response has no string at " + endpoint_.response_pointer);
    }
    return response.at(pointer).get<std::string>();
  }
  throw ProposerUnavailable(endpoint_.url + " unavailable after " +
                            std::to_string(endpoint_.retry.max_attempts) + " attempts (" +
                            last_failure + ")");
}

std::string RemoteProposer::respond(const ProposalRequest& request, Rng& /*rng*/) {
  return client_.complete(request.prompt);
}

std::string remote_propose(const RemoteEndpoint& endpoint, const std::string& prompt) {
  RemoteClient client{endpoint, api_token_from_env()};
  return client.complete(prompt);
}

}  // namespace colt
