// Copyright 2026 The Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "forge/error.h"
#include "forge/modelio.h"
#include "httplib.h"

namespace {

using forge::BackendError;
using forge::BackendRequest;
using forge::BackendResponse;
using forge::ErrorCode;
using forge::RequestKind;
using std::chrono::milliseconds;

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

BackendRequest Prompt(std::string text) {
  BackendRequest r;
  r.text = std::move(text);
  r.model = "teacher";
  return r;
}

// Fails with the scripted statuses, then answers "ok".
class ScriptedBackend : public forge::Backend {
 public:
  explicit ScriptedBackend(std::vector<int> failures) : failures_(std::move(failures)) {}
  BackendResponse Call(const BackendRequest&) override {
    const std::size_t n = calls++;
    if (n < failures_.size()) {
      throw BackendError(ErrorCode::kTransport, failures_[n], "scripted failure");
    }
    BackendResponse r;
    r.text = "ok";
    return r;
  }
  std::size_t calls = 0;

 private:
  std::vector<int> failures_;
};

struct RecordingSleeper {
  std::vector<milliseconds> delays;
  forge::Sleeper fn() {
    return [this](milliseconds d) { delays.push_back(d); };
  }
};

// A local chat-completions lookalike that serves stored bodies.
class WireServer {
 public:
  WireServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      Remember(req);
      if (fail_next_ > 0) {
        --fail_next_;
        res.status = 503;
        return;
      }
      res.set_content(Slurp(FORGE_FIXTURE_DIR "/wire/chat_response.json"), "application/json");
    });
    server_.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      Remember(req);
      res.set_content(Slurp(FORGE_FIXTURE_DIR "/wire/logprobs_response.json"), "application/json");
    });
    server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
      Remember(req);
      res.set_content(Slurp(FORGE_FIXTURE_DIR "/wire/embeddings_response.json"), "application/json");
    });
    server_.Post("/bad/chat/completions", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"choices\": []}", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~WireServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& prefix = "/v1") const {
    return "http://127.0.0.1:" + std::to_string(port_) + prefix;
  }
  nlohmann::json last_body() {
    std::lock_guard<std::mutex> lock(mu_);
    return nlohmann::json::parse(last_body_);
  }
  std::string last_auth() {
    std::lock_guard<std::mutex> lock(mu_);
    return last_auth_;
  }
  std::atomic<int> fail_next_{0};
  std::atomic<int> hits{0};

 private:
  void Remember(const httplib::Request& req) {
    std::lock_guard<std::mutex> lock(mu_);
    ++hits;
    last_body_ = req.body;
    last_auth_ = req.get_header_value("Authorization");
  }
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  std::string last_body_;
  std::string last_auth_;
};

}  // namespace

TEST_SUITE("modelio") {
  TEST_CASE("mock completion table") {
    forge::MockOptions options;
    options.completions["p"] = "r";
    forge::MockBackend mock(options);
    forge::ModelClient client(mock, {});
    CHECK(client.Complete(Prompt("p")) == "r");
    // A table miss without a fallback is a non-retryable 404.
    try {
      client.Complete(Prompt("unknown"));
      FAIL("expected a miss");
    } catch (const BackendError& e) {
      CHECK(e.status() == 404);
    }
  }

  TEST_CASE("mock logprobs and embeddings") {
    forge::MockOptions options;
    options.logprob_per_token = -0.5;
    forge::MockBackend mock(options);
    forge::ModelClient client(mock, {});
    CHECK(client.ScoreLogprobs("a b c", "m") == std::vector<double>{-0.5, -0.5, -0.5});
    CHECK_THROWS_AS(client.ScoreLogprobs("", "m"), forge::Error);
    const auto v = client.EmbedTokens("a b", "m");
    REQUIRE(v.size() == 2);
    CHECK(v[0] != v[1]);
    for (const auto& row : v) {
      double sum = 0;
      for (double x : row) sum += x;
      CHECK(sum == 1.0);
    }
    CHECK(client.EmbedTokens("a b", "m") == v);

    options.supports_logprobs = false;
    forge::MockBackend no_lp(options);
    forge::ModelClient c2(no_lp, {});
    try {
      c2.ScoreLogprobs("x", "m");
      FAIL("expected Unsupported");
    } catch (const forge::Error& e) {
      CHECK(e.code() == ErrorCode::kUnsupported);
    }
  }

  TEST_CASE("retry succeeds on the third attempt") {
    ScriptedBackend backend({503, 503});
    RecordingSleeper sleeper;
    forge::RetryPolicy policy;
    policy.max_retries = 3;
    auto r = forge::WithRetry(backend, Prompt("x"), policy, sleeper.fn());
    CHECK(*r.text == "ok");
    CHECK(backend.calls == 3);
  }

  TEST_CASE("non-retryable status fails after one attempt") {
    ScriptedBackend backend({400});
    RecordingSleeper sleeper;
    CHECK_THROWS_AS(forge::WithRetry(backend, Prompt("x"), {}, sleeper.fn()), BackendError);
    CHECK(backend.calls == 1);
    CHECK(sleeper.delays.empty());
  }

  TEST_CASE("exhausted retries surface the transport error") {
    ScriptedBackend backend({0, 0, 0, 0});
    RecordingSleeper sleeper;
    forge::RetryPolicy policy;
    policy.max_retries = 2;
    try {
      forge::WithRetry(backend, Prompt("x"), policy, sleeper.fn());
      FAIL("expected Transport");
    } catch (const BackendError& e) {
      CHECK(e.code() == ErrorCode::kTransport);
    }
    CHECK(backend.calls == 3);
  }

  TEST_CASE("backoff delays on a simulated clock") {
    ScriptedBackend backend({503, 503, 503, 503});
    RecordingSleeper sleeper;
    forge::RetryPolicy policy;
    policy.max_retries = 3;
    policy.base_delay = milliseconds(100);
    policy.backoff_factor = 2.0;
    CHECK_THROWS(forge::WithRetry(backend, Prompt("x"), policy, sleeper.fn()));
    CHECK(sleeper.delays == std::vector<milliseconds>{milliseconds(100), milliseconds(200),
                                                      milliseconds(400)});
    policy.max_delay = milliseconds(150);
    CHECK(policy.DelayBefore(5) == milliseconds(150));
    policy.max_retries = 11;
    CHECK_THROWS_AS(policy.Validate(), forge::Error);
  }

  TEST_CASE("fixture replay returns the stored exchange byte for byte") {
    auto fixture = forge::FixtureBackend::Load(FORGE_FIXTURE_DIR "/teacher_exchange.jsonl");
    forge::ModelClient client(fixture, {});
    BackendRequest req;
    req.text = "[INST] Rewrite the following instruction while maintaining semantic "
               "consistency: [/INST] Generate an ad for the following product.";
    req.model = "gpt-3.5-turbo-0301";
    CHECK(client.Complete(req) == "Produce an advertisement for the specified product.");
    CHECK(client.ScoreLogprobs("pink salt lamp", "gpt2-xl") ==
          std::vector<double>{-2.75, -7.25, -1.5});
    CHECK(client.EmbedTokens("salt lamp", "bert-base-uncased") ==
          forge::TokenVectors{{1.0, 0.0, 0.25}, {0.0, 1.0, 0.5}});
    req.text += " ";
    CHECK_THROWS_AS(client.Complete(req), BackendError);
  }

  TEST_CASE("recording backend round-trips through a fixture file") {
    forge::MockOptions options;
    options.completions["hello"] = "world";
    forge::MockBackend mock(options);
    forge::RecordingBackend rec(mock);
    forge::ModelClient client(rec, {});
    client.Complete(Prompt("hello"));
    client.ScoreLogprobs("a b", "m");
    const auto path = std::filesystem::temp_directory_path() / "forge_recorded_fixture.jsonl";
    rec.Save(path);
    auto replay = forge::FixtureBackend::Load(path);
    forge::ModelClient again(replay, {});
    CHECK(again.Complete(Prompt("hello")) == "world");
    CHECK(again.ScoreLogprobs("a b", "m") == std::vector<double>{-1.0, -1.0});
  }

  TEST_CASE("wire bodies follow the chat-completions layout") {
    BackendRequest req = Prompt("hi there");
    req.seed = 42;
    auto chat = forge::wire::ChatBody(req);
    CHECK(chat["model"] == "teacher");
    CHECK(chat["messages"][0]["role"] == "user");
    CHECK(chat["messages"][0]["content"] == "hi there");
    CHECK(chat["temperature"] == 0.7);
    CHECK(chat["max_tokens"] == 256);
    CHECK(chat["seed"] == 42);
    auto lp = forge::wire::LogprobBody(req);
    CHECK(lp["echo"] == true);
    CHECK(lp["prompt"] == "hi there");
    auto emb = forge::wire::EmbedBody(req);
    CHECK(emb["input"] == nlohmann::json::array({"hi", "there"}));
    CHECK_THROWS_AS(forge::wire::ParseChat("{\"choices\":[{}]}"), BackendError);
    CHECK_THROWS_AS(forge::wire::ParseChat("not json"), BackendError);
  }

  TEST_CASE("http backend against a local server") {
    WireServer server;
    ::setenv("FORGE_TEST_KEY", "sk-test", 1);
    forge::HttpBackendConfig cfg;
    cfg.base_url = server.url();
    cfg.api_key_env = "FORGE_TEST_KEY";
    cfg.timeout_s = 5;
    forge::HttpBackend http(cfg);
    RecordingSleeper sleeper;
    forge::ModelClient client(http, {}, sleeper.fn());

    BackendRequest req = Prompt("Rewrite this.");
    CHECK(client.Complete(req) == "Produce an advertisement for the specified product.");
    CHECK(server.last_body()["messages"][0]["content"] == "Rewrite this.");
    CHECK(server.last_auth() == "Bearer sk-test");

    CHECK(client.ScoreLogprobs("pink salt lamp", "gpt2-xl") == std::vector<double>{-7.25, -1.5});
    CHECK(server.last_body()["echo"] == true);
    CHECK(client.EmbedTokens("salt lamp", "bert") ==
          forge::TokenVectors{{1.0, 0.0, 0.25}, {0.0, 1.0, 0.5}});

    server.fail_next_ = 2;
    const int before = server.hits;
    CHECK(client.Complete(req) == "Produce an advertisement for the specified product.");
    CHECK(server.hits - before == 3);
    CHECK(sleeper.delays.size() == 2);

    cfg.base_url = server.url("/bad");
    forge::HttpBackend bad(cfg);
    forge::ModelClient bad_client(bad, {}, sleeper.fn());
    try {
      bad_client.Complete(req);
      FAIL("expected MalformedResponse");
    } catch (const forge::Error& e) {
      CHECK(e.code() == ErrorCode::kMalformedResponse);
    }
    try {
      bad_client.ScoreLogprobs("x", "m");
      FAIL("expected Unsupported");
    } catch (const forge::Error& e) {
      CHECK(e.code() == ErrorCode::kUnsupported);
    }
  }

  TEST_CASE("unreachable server exhausts retries with a transport error") {
    forge::HttpBackendConfig cfg;
    cfg.base_url = "http://127.0.0.1:9/v1";  // discard port, nothing listens
    cfg.timeout_s = 1;
    forge::HttpBackend http(cfg);
    RecordingSleeper sleeper;
    forge::RetryPolicy policy;
    policy.max_retries = 2;
    forge::ModelClient client(http, policy, sleeper.fn());
    try {
      client.Complete(Prompt("x"));
      FAIL("expected a transport failure");
    } catch (const BackendError& e) {
      CHECK((e.code() == ErrorCode::kTransport || e.code() == ErrorCode::kTimeout));
      CHECK(e.status() == 0);
    }
    CHECK(sleeper.delays.size() == 2);
  }
}
