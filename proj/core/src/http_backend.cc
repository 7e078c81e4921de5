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

#include <cstdlib>

#include <httplib.h>

#include "forge/error.h"
#include "forge/modelio.h"
#include "forge/text.h"

namespace forge {
namespace wire {

using nlohmann::json;

namespace {

json ParseBody(std::string_view body) {
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw BackendError(ErrorCode::kMalformedResponse, 200,
                       "response body is not a JSON object");
  }
  return j;
}

[[noreturn]] void Malformed(const std::string& what) {
  throw BackendError(ErrorCode::kMalformedResponse, 200, what);
}

}  // namespace

json ChatBody(const BackendRequest& request) {
  json body{
      {"model", request.model},
      {"messages", json::array({{{"role", "user"}, {"content", request.text}}})},
      {"temperature", request.decoding.temperature},
      {"max_tokens", request.decoding.max_tokens},
  };
  if (request.seed) body["seed"] = *request.seed;
  return body;
}

json LogprobBody(const BackendRequest& request) {
  return json{
      {"model", request.model}, {"prompt", request.text}, {"max_tokens", 0},
      {"echo", true},           {"logprobs", 0},          {"temperature", 0},
  };
}

json EmbedBody(const BackendRequest& request) {
  return json{
      {"model", request.model},
      {"input", Tokenize(request.text)},
      {"encoding_format", "float"},
  };
}

std::string ParseChat(std::string_view body) {
  json j = ParseBody(body);
  const json* content = nullptr;
  if (j.contains("choices") && j["choices"].is_array() &&
      !j["choices"].empty()) {
    const json& choice = j["choices"][0];
    if (choice.contains("message") && choice["message"].is_object() &&
        choice["message"].contains("content")) {
      content = &choice["message"]["content"];
    }
  }
  if (content == nullptr || !content->is_string()) {
    Malformed("missing choices[0].message.content");
  }
  return content->get<std::string>();
}

std::vector<double> ParseLogprobs(std::string_view body) {
  json j = ParseBody(body);
  if (!j.contains("choices") || !j["choices"].is_array() ||
      j["choices"].empty()) {
    Malformed("missing choices");
  }
  const json& choice = j["choices"][0];
  if (!choice.contains("logprobs") || !choice["logprobs"].is_object() ||
      !choice["logprobs"].contains("token_logprobs") ||
      !choice["logprobs"]["token_logprobs"].is_array()) {
    Malformed("missing choices[0].logprobs.token_logprobs");
  }
  std::vector<double> out;
  const json& values = choice["logprobs"]["token_logprobs"];
  for (std::size_t i = 0; i < values.size(); ++i) {
    // The first echoed token has no context and reports null.
    if (values[i].is_null() && i == 0) continue;
    if (!values[i].is_number()) Malformed("non-numeric token logprob");
    out.push_back(values[i].get<double>());
  }
  return out;
}

TokenVectors ParseEmbeddings(std::string_view body) {
  json j = ParseBody(body);
  if (!j.contains("data") || !j["data"].is_array()) Malformed("missing data");
  std::vector<std::pair<std::int64_t, std::vector<double>>> rows;
  for (const json& item : j["data"]) {
    if (!item.is_object() || !item.contains("embedding") ||
        !item["embedding"].is_array()) {
      Malformed("data item without embedding");
    }
    const std::int64_t index =
        item.contains("index") && item["index"].is_number_integer()
            ? item["index"].get<std::int64_t>()
            : static_cast<std::int64_t>(rows.size());
    rows.emplace_back(index, item["embedding"].get<std::vector<double>>());
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  TokenVectors out;
  out.reserve(rows.size());
  for (auto& row : rows) out.push_back(std::move(row.second));
  return out;
}

}  // namespace wire

namespace {

struct ParsedUrl {
  std::string scheme_host_port;
  std::string prefix;
};

ParsedUrl ParseBaseUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfig, "base_url needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl parsed;
  parsed.scheme_host_port = url.substr(0, path_start);
  if (path_start != std::string::npos) {
    parsed.prefix = url.substr(path_start);
    while (!parsed.prefix.empty() && parsed.prefix.back() == '/') {
      parsed.prefix.pop_back();
    }
  }
  return parsed;
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  ParseBaseUrl(config_.base_url);
  if (config_.timeout_s <= 0) {
    throw Error(ErrorCode::kConfig, "timeout_s must be positive");
  }
}

BackendResponse HttpBackend::Call(const BackendRequest& request) {
  const ParsedUrl url = ParseBaseUrl(config_.base_url);
  // A client per call keeps concurrent calls independent.
  httplib::Client client(url.scheme_host_port);
  client.set_connection_timeout(config_.timeout_s, 0);
  client.set_read_timeout(config_.timeout_s, 0);
  client.set_write_timeout(config_.timeout_s, 0);

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str());
        key != nullptr && *key != '\0') {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  std::string path;
  nlohmann::json body;
  switch (request.kind) {
    case RequestKind::kComplete:
      path = url.prefix + config_.chat_path;
      body = wire::ChatBody(request);
      break;
    case RequestKind::kLogprobs:
      path = url.prefix + config_.completions_path;
      body = wire::LogprobBody(request);
      break;
    case RequestKind::kEmbed:
      path = url.prefix + config_.embeddings_path;
      body = wire::EmbedBody(request);
      break;
  }

  auto result = client.Post(path, headers, body.dump(), "application/json");
  if (!result) {
    const auto err = result.error();
    const bool timeout =
        err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
    throw BackendError(timeout ? ErrorCode::kTimeout : ErrorCode::kTransport, 0,
                       "POST " + path + ": " + httplib::to_string(err));
  }
  if (result->status == 404 || result->status == 501) {
    if (request.kind != RequestKind::kComplete) {
      throw BackendError(ErrorCode::kUnsupported, result->status,
                         "backend does not serve " + path);
    }
  }
  if (result->status < 200 || result->status >= 300) {
    throw BackendError(ErrorCode::kTransport, result->status,
                       "POST " + path + " returned HTTP " +
                           std::to_string(result->status));
  }

  BackendResponse response;
  switch (request.kind) {
    case RequestKind::kComplete:
      response.text = wire::ParseChat(result->body);
      break;
    case RequestKind::kLogprobs:
      response.token_logprobs = wire::ParseLogprobs(result->body);
      break;
    case RequestKind::kEmbed:
      response.token_vectors = wire::ParseEmbeddings(result->body);
      break;
  }
  return response;
}

}  // namespace forge
