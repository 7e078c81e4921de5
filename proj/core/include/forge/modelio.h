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

#ifndef FORGE_MODELIO_H_
#define FORGE_MODELIO_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge {

enum class RequestKind : std::uint8_t { kComplete, kLogprobs, kEmbed };

std::string_view RequestKindName(RequestKind kind);

struct Decoding {
  double temperature = 0.7;
  int max_tokens = 256;

  friend bool operator==(const Decoding&, const Decoding&) = default;
};

// One model call. Requests are plain values: comparable, hashable through
// their JSON form, and never mutated by a backend. `seed` distinguishes
// repeated samples of the same prompt.
struct BackendRequest {
  RequestKind kind = RequestKind::kComplete;
  std::string text;
  Decoding decoding;
  std::string model;
  std::optional<std::uint64_t> seed;

  // Throws Error(kInvalidArgument) on an empty prompt or max_tokens < 1 for
  // completions.
  void Validate() const;

  friend bool operator==(const BackendRequest&,
                         const BackendRequest&) = default;
};

using TokenVectors = std::vector<std::vector<double>>;

struct BackendResponse {
  std::optional<std::string> text;
  std::optional<std::vector<double>> token_logprobs;  // natural log, <= 0
  std::optional<TokenVectors> token_vectors;

  // Exactly one payload, matching `kind`; logprobs all <= 0; vectors share
  // one width.
  bool ValidFor(RequestKind kind) const;

  friend bool operator==(const BackendResponse&,
                         const BackendResponse&) = default;
};

nlohmann::json ToJson(const BackendRequest& request);
nlohmann::json ToJson(const BackendResponse& response);
BackendRequest RequestFromJson(const nlohmann::json& j);
BackendResponse ResponseFromJson(const nlohmann::json& j);

// A model backend. Implementations must be callable from several threads at
// once.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResponse Call(const BackendRequest& request) = 0;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{500};
  double backoff_factor = 2.0;
  std::chrono::milliseconds max_delay{30000};
  // Status 0 stands for "no HTTP response" (connection failure, timeout).
  std::set<int> retryable_statuses{0, 408, 429, 500, 502, 503, 504};

  static constexpr int kMaxRetriesLimit = 10;

  void Validate() const;
  // Delay before retry number `retry` (0-based): base * factor^retry, capped.
  std::chrono::milliseconds DelayBefore(int retry) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

void SleepFor(std::chrono::milliseconds delay);

// Calls the backend, retrying BackendErrors whose status is retryable, with
// exponential backoff through `sleep`. At most max_retries + 1 attempts; the
// last error is rethrown on exhaustion. Non-retryable errors surface after
// one attempt.
BackendResponse WithRetry(Backend& backend, const BackendRequest& request,
                          const RetryPolicy& policy,
                          const Sleeper& sleep = SleepFor);

// Typed entry points over a backend with a retry policy.
class ModelClient {
 public:
  ModelClient(Backend& backend, RetryPolicy policy, Sleeper sleep = SleepFor);

  // First message text, passed through CleanText.
  std::string Complete(const BackendRequest& request) const;
  // One natural-log probability per backend token.
  std::vector<double> ScoreLogprobs(std::string_view text,
                                    const std::string& model) const;
  // One vector per token of forge::Tokenize(text).
  TokenVectors EmbedTokens(std::string_view text,
                           const std::string& model) const;

 private:
  Backend* backend_;
  RetryPolicy policy_;
  Sleeper sleep_;
};

// --- Offline backends -----------------------------------------------------

using CompletionFn = std::function<std::string(const BackendRequest&)>;

struct MockOptions {
  // Exact prompt -> reply table, consulted first.
  std::map<std::string, std::string> completions;
  // Used when the table has no entry; without it a miss is a 404.
  CompletionFn fallback;
  double logprob_per_token = -1.0;
  std::size_t embedding_dim = 512;
  bool supports_logprobs = true;
  bool supports_embeddings = true;
};

// Pure table backend. Logprobs are one fixed value per forge::Tokenize token;
// embeddings are one-hot at FNV-1a(token) mod embedding_dim.
class MockBackend : public Backend {
 public:
  explicit MockBackend(MockOptions options);
  BackendResponse Call(const BackendRequest& request) override;

 private:
  MockOptions options_;
};

// Returns the payload that follows the last "[/INST]" marker, trimmed.
std::string EchoPayload(const BackendRequest& request);

// Replays stored {request, response} exchanges; a miss is a 404.
class FixtureBackend : public Backend {
 public:
  static FixtureBackend Load(const std::filesystem::path& path);
  void Add(const BackendRequest& request, const BackendResponse& response);
  BackendResponse Call(const BackendRequest& request) override;

 private:
  std::map<std::string, BackendResponse> table_;
};

// Forwards to another backend and records every successful exchange.
class RecordingBackend : public Backend {
 public:
  explicit RecordingBackend(Backend& inner) : inner_(&inner) {}
  BackendResponse Call(const BackendRequest& request) override;
  // JSONL {request, response}, sorted by request for stable output.
  void Save(const std::filesystem::path& path) const;

 private:
  Backend* inner_;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> exchanges_;
};

// --- Wire backend ---------------------------------------------------------

struct HttpBackendConfig {
  // e.g. "https://api.example.com/v1"; paths below are appended.
  std::string base_url = "http://127.0.0.1:8000/v1";
  // Name of the environment variable holding the bearer token; empty or unset
  // means no Authorization header.
  std::string api_key_env = "FORGE_API_KEY";
  int timeout_s = 60;
  std::string chat_path = "/chat/completions";
  std::string completions_path = "/completions";
  std::string embeddings_path = "/embeddings";
};

// Chat-completions style HTTP+JSON backend:
//   complete  POST chat_path {model, messages:[{role:"user", content}],
//             temperature, max_tokens[, seed]}
//             -> choices[0].message.content
//   logprobs  POST completions_path {model, prompt, max_tokens:0, echo:true,
//             logprobs:0, temperature:0}
//             -> choices[0].logprobs.token_logprobs (leading null dropped)
//   embed     POST embeddings_path {model, input:[tokens...],
//             encoding_format:"float"} -> data[i].embedding, sorted by index
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  BackendResponse Call(const BackendRequest& request) override;

 private:
  HttpBackendConfig config_;
};

namespace wire {

nlohmann::json ChatBody(const BackendRequest& request);
nlohmann::json LogprobBody(const BackendRequest& request);
nlohmann::json EmbedBody(const BackendRequest& request);
// Each throws BackendError(kMalformedResponse) on an unexpected shape.
std::string ParseChat(std::string_view body);
std::vector<double> ParseLogprobs(std::string_view body);
TokenVectors ParseEmbeddings(std::string_view body);

}  // namespace wire

}  // namespace forge

#endif  // FORGE_MODELIO_H_
