#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "colt/error.hpp"
#include "colt/parse.hpp"
#include "colt/remote.hpp"

using namespace colt;
using nlohmann::json;

namespace {

// Local HTTP server running on a background thread for the lifetime of the object.
class MockServer {
 public:
  explicit MockServer(httplib::Server::Handler handler) {
    server_.Post("/v1/chat", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread{[this] { server_.listen_after_bind(); }};
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  [[nodiscard]] std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::string chat_body(const std::string& content) {
  return json{{"choices", json::array({{{"message", {{"role", "assistant"}, {"content", content}}}}})}}.dump();
}

RemoteEndpoint endpoint_for(const MockServer& server) {
  RemoteEndpoint e;
  e.url = server.url();
  e.model_name = "large-model";
  e.timeout = std::chrono::seconds{5};
  return e;
}

}  // namespace

TEST_CASE("canned answer round trip") {
  const std::string canned = R"J({"transformations": ["Tile(8)", "Vectorize"], "next_model": "small"})J";
  std::string seen_auth;
  json seen_body;
  MockServer server{[&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    seen_body = json::parse(req.body);
    res.set_content(chat_body(canned), "application/json");
  }};
  RemoteClient client{endpoint_for(server), "secret"};
  const std::string text = client.complete("the prompt");
  CHECK(text == canned);
  CHECK(seen_auth == "Bearer secret");
  CHECK(seen_body["model"] == "large-model");
  REQUIRE(seen_body["messages"].size() == 1);
  CHECK(seen_body["messages"][0]["role"] == "system");
  CHECK(seen_body["messages"][0]["content"] == "the prompt");

  const ModelSet models{{{"small", 1e9}, {"large", 2e9}}};
  Rng rng{0};
  const auto p = parse_proposal(text, ProgramState{}, models, "large", rng);
  CHECK(p.mutators == std::vector<Mutator>{Mutator::tile(8), Mutator::vectorize()});
  CHECK(p.next_model == "small");
  CHECK(p.errors() == 0);
}

TEST_CASE("server errors exhaust the retry policy") {
  std::atomic<int> hits{0};
  MockServer server{[&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 500;
  }};
  std::vector<std::chrono::milliseconds> sleeps;
  RemoteClient client{endpoint_for(server), "t", [&](std::chrono::milliseconds d) { sleeps.push_back(d); }};
  CHECK_THROWS_AS(client.complete("p"), ProposerUnavailable);
  CHECK(hits == 3);
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds{1000},
                                                          std::chrono::milliseconds{2000}});
}

TEST_CASE("a transient failure is retried") {
  std::atomic<int> hits{0};
  MockServer server{[&](const httplib::Request&, httplib::Response& res) {
    if (++hits == 1) {
      res.status = 429;
      return;
    }
    res.set_content(chat_body("ok"), "application/json");
  }};
  int slept = 0;
  RemoteClient client{endpoint_for(server), "t", [&](std::chrono::milliseconds) { ++slept; }};
  CHECK(client.complete("p") == "ok");
  CHECK(slept == 1);
}

TEST_CASE("client errors are not retried") {
  std::atomic<int> hits{0};
  MockServer server{[&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 401;
  }};
  RemoteClient client{endpoint_for(server), "t", [](std::chrono::milliseconds) {}};
  CHECK_THROWS_AS(client.complete("p"), ProposerUnavailable);
  CHECK(hits == 1);
}

TEST_CASE("schema mismatch is unparseable") {
  MockServer server{[](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"output": "text"})", "application/json");
  }};
  RemoteClient client{endpoint_for(server), "t", [](std::chrono::milliseconds) {}};
  CHECK_THROWS_AS(client.complete("p"), UnparseableResponse);

  MockServer html{[](const httplib::Request&, httplib::Response& res) {
    res.set_content("<html>", "text/html");
  }};
  RemoteClient other{endpoint_for(html), "t", [](std::chrono::milliseconds) {}};
  CHECK_THROWS_AS(other.complete("p"), UnparseableResponse);
}

TEST_CASE("custom response pointer") {
  MockServer server{[](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"result": {"text": "hello"}})", "application/json");
  }};
  auto e = endpoint_for(server);
  e.response_pointer = "/result/text";
  RemoteClient client{e, "t"};
  CHECK(client.complete("p") == "hello");
}

TEST_CASE("unreachable endpoint") {
  RemoteEndpoint e;
  e.url = "http://127.0.0.1:1/none";
  e.model_name = "m";
  e.timeout = std::chrono::seconds{1};
  int slept = 0;
  RemoteClient client{e, "t", [&](std::chrono::milliseconds) { ++slept; }};
  CHECK_THROWS_AS(client.complete("p"), ProposerUnavailable);
  CHECK(slept == 2);
}

TEST_CASE("configuration is checked before any request") {
  ::unsetenv(kApiTokenEnv);
  CHECK_THROWS_AS(api_token_from_env(), ConfigError);
  RemoteEndpoint e;
  e.url = "http://127.0.0.1:9/x";
  e.model_name = "m";
  CHECK_THROWS_AS(remote_propose(e, "p"), ConfigError);
  ::setenv(kApiTokenEnv, "abc", 1);
  CHECK(api_token_from_env() == "abc");
  ::unsetenv(kApiTokenEnv);

  CHECK_THROWS_AS(RemoteClient(e, ""), ConfigError);
  e.response_pointer = "no-slash";
  CHECK_THROWS_AS(RemoteClient(e, "t"), ConfigError);
  e.response_pointer = "/ok";
  e.url = "ftp://host/x";
  CHECK_THROWS_AS(RemoteClient(e, "t"), ConfigError);
}

TEST_CASE("parse_url and backoff schedule") {
  const auto u = parse_url("http://example.org:8080/v1/chat/completions");
  CHECK(u.scheme == "http");
  CHECK(u.host == "example.org");
  CHECK(u.port == 8080);
  CHECK(u.path == "/v1/chat/completions");
  CHECK(parse_url("https://api.example.org").port == 443);
  CHECK(parse_url("https://api.example.org").path == "/");

  const RetryPolicy r;
  CHECK(r.backoff_before(1).count() == 0);
  CHECK(r.backoff_before(2).count() == 1000);
  CHECK(r.backoff_before(3).count() == 2000);
  CHECK(r.backoff_before(4).count() == 4000);
}
