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

#include "forge/modelio.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "forge/error.h"
#include "forge/rng.h"
#include "forge/text.h"

namespace forge {

using nlohmann::json;

std::string_view RequestKindName(RequestKind kind) {
  switch (kind) {
    case RequestKind::kComplete: return "complete";
    case RequestKind::kLogprobs: return "logprobs";
    case RequestKind::kEmbed: return "embed";
  }
  return "unknown";
}

void BackendRequest::Validate() const {
  if (text.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "request text is empty");
  }
  if (kind == RequestKind::kComplete && decoding.max_tokens < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_tokens must be >= 1");
  }
  if (decoding.temperature < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
}

bool BackendResponse::ValidFor(RequestKind kind) const {
  const int payloads = int{text.has_value()} +
                       int{token_logprobs.has_value()} +
                       int{token_vectors.has_value()};
  if (payloads != 1) return false;
  switch (kind) {
    case RequestKind::kComplete:
      return text.has_value();
    case RequestKind::kLogprobs:
      return token_logprobs &&
             std::all_of(token_logprobs->begin(), token_logprobs->end(),
                         [](double lp) { return lp <= 0.0; });
    case RequestKind::kEmbed: {
      if (!token_vectors) return false;
      if (token_vectors->empty()) return true;
      const std::size_t width = token_vectors->front().size();
      return width > 0 &&
             std::all_of(token_vectors->begin(), token_vectors->end(),
                         [&](const auto& v) { return v.size() == width; });
    }
  }
  return false;
}

json ToJson(const BackendRequest& request) {
  return json{
      {"kind", RequestKindName(request.kind)},
      {"text", request.text},
      {"temperature", request.decoding.temperature},
      {"max_tokens", request.decoding.max_tokens},
      {"model", request.model},
      {"seed", request.seed ? json(*request.seed) : json(nullptr)},
  };
}

json ToJson(const BackendResponse& response) {
  json j = json::object();
  if (response.text) j["text"] = *response.text;
  if (response.token_logprobs) j["token_logprobs"] = *response.token_logprobs;
  if (response.token_vectors) j["token_vectors"] = *response.token_vectors;
  return j;
}

BackendRequest RequestFromJson(const json& j) {
  BackendRequest r;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "complete") {
    r.kind = RequestKind::kComplete;
  } else if (kind == "logprobs") {
    r.kind = RequestKind::kLogprobs;
  } else if (kind == "embed") {
    r.kind = RequestKind::kEmbed;
  } else {
    throw Error(ErrorCode::kMalformedInput, "unknown request kind " + kind);
  }
  r.text = j.at("text").get<std::string>();
  r.decoding.temperature = j.value("temperature", 0.7);
  r.decoding.max_tokens = j.value("max_tokens", 256);
  r.model = j.value("model", "");
  if (j.contains("seed") && !j["seed"].is_null()) {
    r.seed = j["seed"].get<std::uint64_t>();
  }
  return r;
}

BackendResponse ResponseFromJson(const json& j) {
  BackendResponse r;
  if (j.contains("text")) r.text = j["text"].get<std::string>();
  if (j.contains("token_logprobs")) {
    r.token_logprobs = j["token_logprobs"].get<std::vector<double>>();
  }
  if (j.contains("token_vectors")) {
    r.token_vectors = j["token_vectors"].get<TokenVectors>();
  }
  return r;
}

// --- Retry ----------------------------------------------------------------

void RetryPolicy::Validate() const {
  if (max_retries < 0 || max_retries > kMaxRetriesLimit) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_retries must be in [0, " +
                    std::to_string(kMaxRetriesLimit) + "]");
  }
  if (!(backoff_factor > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "backoff_factor must be > 1");
  }
  if (base_delay.count() < 0 || max_delay < base_delay) {
    throw Error(ErrorCode::kInvalidArgument,
                "delays must satisfy 0 <= base_delay <= max_delay");
  }
}

std::chrono::milliseconds RetryPolicy::DelayBefore(int retry) const {
  const double raw = static_cast<double>(base_delay.count()) *
                     std::pow(backoff_factor, retry);
  const double capped = std::min(raw, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(capped)));
}

void SleepFor(std::chrono::milliseconds delay) {
  std::this_thread::sleep_for(delay);
}

BackendResponse WithRetry(Backend& backend, const BackendRequest& request,
                          const RetryPolicy& policy, const Sleeper& sleep) {
  policy.Validate();
  request.Validate();
  for (int attempt = 0;; ++attempt) {
    try {
      BackendResponse response = backend.Call(request);
      if (!response.ValidFor(request.kind)) {
        throw BackendError(ErrorCode::kMalformedResponse, 200,
                           "backend returned a payload that does not match a " +
                               std::string(RequestKindName(request.kind)) +
                               " request");
      }
      return response;
    } catch (const BackendError& e) {
      const bool retryable =
          (e.code() == ErrorCode::kTransport ||
           e.code() == ErrorCode::kTimeout) &&
          policy.retryable_statuses.count(e.status()) > 0;
      if (!retryable || attempt >= policy.max_retries) throw;
      sleep(policy.DelayBefore(attempt));
    }
  }
}

ModelClient::ModelClient(Backend& backend, RetryPolicy policy, Sleeper sleep)
    : backend_(&backend), policy_(std::move(policy)), sleep_(std::move(sleep)) {
  policy_.Validate();
}

std::string ModelClient::Complete(const BackendRequest& request) const {
  if (request.kind != RequestKind::kComplete) {
    throw Error(ErrorCode::kInvalidArgument,
                "Complete requires a complete-kind request");
  }
  return CleanText(*WithRetry(*backend_, request, policy_, sleep_).text);
}

std::vector<double> ModelClient::ScoreLogprobs(std::string_view text,
                                               const std::string& model) const {
  BackendRequest request;
  request.kind = RequestKind::kLogprobs;
  request.text = std::string(text);
  request.model = model;
  request.decoding.temperature = 0.0;
  return *WithRetry(*backend_, request, policy_, sleep_).token_logprobs;
}

TokenVectors ModelClient::EmbedTokens(std::string_view text,
                                      const std::string& model) const {
  BackendRequest request;
  request.kind = RequestKind::kEmbed;
  request.text = std::string(text);
  request.model = model;
  request.decoding.temperature = 0.0;
  return *WithRetry(*backend_, request, policy_, sleep_).token_vectors;
}

// --- Mock -----------------------------------------------------------------

MockBackend::MockBackend(MockOptions options) : options_(std::move(options)) {
  if (options_.embedding_dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding_dim must be > 0");
  }
  if (options_.logprob_per_token > 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "logprob_per_token must be <= 0");
  }
}

BackendResponse MockBackend::Call(const BackendRequest& request) {
  BackendResponse response;
  switch (request.kind) {
    case RequestKind::kComplete: {
      if (auto it = options_.completions.find(request.text);
          it != options_.completions.end()) {
        response.text = it->second;
      } else if (options_.fallback) {
        response.text = options_.fallback(request);
      } else {
        throw BackendError(ErrorCode::kTransport, 404,
                           "mock: no completion for prompt");
      }
      break;
    }
    case RequestKind::kLogprobs: {
      if (!options_.supports_logprobs) {
        throw BackendError(ErrorCode::kUnsupported, 501,
                           "mock: logprobs disabled");
      }
      response.token_logprobs = std::vector<double>(
          Tokenize(request.text).size(), options_.logprob_per_token);
      break;
    }
    case RequestKind::kEmbed: {
      if (!options_.supports_embeddings) {
        throw BackendError(ErrorCode::kUnsupported, 501,
                           "mock: embeddings disabled");
      }
      TokenVectors vectors;
      for (const auto& token : Tokenize(request.text)) {
        std::vector<double> v(options_.embedding_dim, 0.0);
        v[Fnv1a64(token) % options_.embedding_dim] = 1.0;
        vectors.push_back(std::move(v));
      }
      response.token_vectors = std::move(vectors);
      break;
    }
  }
  return response;
}

std::string EchoPayload(const BackendRequest& request) {
  constexpr std::string_view kMarker = "[/INST]";
  std::string_view text = request.text;
  if (auto pos = text.rfind(kMarker); pos != std::string_view::npos) {
    text.remove_prefix(pos + kMarker.size());
  }
  return CleanText(text);
}

// --- Fixtures -------------------------------------------------------------

FixtureBackend FixtureBackend::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable, "cannot read " + path.string());
  }
  FixtureBackend backend;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json row = json::parse(line);
      backend.Add(RequestFromJson(row.at("request")),
                  ResponseFromJson(row.at("response")));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedInput,
                  path.string() + ": bad fixture row: " + e.what());
    }
  }
  return backend;
}

void FixtureBackend::Add(const BackendRequest& request,
                         const BackendResponse& response) {
  table_[ToJson(request).dump()] = response;
}

BackendResponse FixtureBackend::Call(const BackendRequest& request) {
  auto it = table_.find(ToJson(request).dump());
  if (it == table_.end()) {
    throw BackendError(ErrorCode::kTransport, 404,
                       "fixture: no recorded exchange for request");
  }
  return it->second;
}

BackendResponse RecordingBackend::Call(const BackendRequest& request) {
  BackendResponse response = inner_->Call(request);
  json req = ToJson(request);
  std::string key = req.dump();
  json exchange{{"request", std::move(req)}, {"response", ToJson(response)}};
  std::lock_guard<std::mutex> lock(mu_);
  exchanges_[std::move(key)] = std::move(exchange);
  return response;
}

void RecordingBackend::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [key, exchange] : exchanges_) out << exchange.dump() << '\n';
}

}  // namespace forge
