// Copyright 2026 The Dualtrack Authors.
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

// JSON-over-HTTP providers.
//   LLM:       POST {prompt, temperature, max_tokens}   -> {text}
//   embedding: POST {texts: [...]}                      -> {embeddings: [[...], ...]}
//   rerank:    POST {query, documents: [...]}           -> {scores: [...]}

#pragma once

#include <algorithm>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualtrack/error.hpp"
#include "dualtrack/http.hpp"
#include "dualtrack/llm.hpp"
#include "dualtrack/scorer.hpp"

namespace dualtrack {

namespace detail {

inline nlohmann::json post_json(HttpTransport& transport, const std::string& url,
                                const nlohmann::json& body, const RetryPolicy& retry,
                                const Sleeper& sleep) {
  HttpResponse resp;
  try {
    resp = send_with_retry(
        [&] { return transport.post(url, body.dump(), "application/json", {}); }, retry, sleep,
        "POST " + url);
  } catch (const Error& e) {
    throw Error(ErrorCode::kProvider, e.what());
  }
  auto doc = nlohmann::json::parse(resp.body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kProvider, url + " returned a non-JSON-object body");
  }
  return doc;
}

}  // namespace detail

class HttpLlmProvider final : public LlmProvider {
 public:
  // A positive `max_tokens` caps every request's own limit.
  HttpLlmProvider(std::string url, std::shared_ptr<HttpTransport> transport,
                  RetryPolicy retry = {}, Sleeper sleep = real_sleeper(), int max_tokens = 0)
      : url_(std::move(url)), transport_(std::move(transport)), retry_(retry),
        sleep_(std::move(sleep)), max_tokens_(max_tokens) {}

  CompletionResponse complete(const CompletionRequest& request) const override {
    auto doc = detail::post_json(*transport_, url_,
                                 {{"prompt", request.prompt},
                                  {"temperature", request.temperature},
                                  {"max_tokens", max_tokens_ > 0
                                                     ? std::min(request.max_tokens, max_tokens_)
                                                     : request.max_tokens}},
                                 retry_, sleep_);
    if (!doc.contains("text") || !doc["text"].is_string()) {
      throw Error(ErrorCode::kProvider, url_ + " response has no string 'text'");
    }
    return {doc["text"].get<std::string>(), "http"};
  }

 private:
  std::string url_;
  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy retry_;
  Sleeper sleep_;
  int max_tokens_;
};

class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string url, std::size_t dimension,
                        std::shared_ptr<HttpTransport> transport, RetryPolicy retry = {},
                        Sleeper sleep = real_sleeper())
      : url_(std::move(url)), dimension_(dimension), transport_(std::move(transport)),
        retry_(retry), sleep_(std::move(sleep)) {}

  std::size_t dimension() const override { return dimension_; }

  std::vector<Embedding> embed(std::span<const std::string> texts) const override {
    nlohmann::json body{{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
    auto doc = detail::post_json(*transport_, url_, body, retry_, sleep_);
    if (!doc.contains("embeddings") || !doc["embeddings"].is_array()) {
      throw Error(ErrorCode::kProvider, url_ + " response has no 'embeddings' list");
    }
    std::vector<Embedding> out;
    try {
      out = doc["embeddings"].get<std::vector<Embedding>>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kProvider, url_ + " embeddings are not numeric vectors");
    }
    for (const auto& v : out) {
      if (v.size() != dimension_) {
        throw Error(ErrorCode::kDimensionMismatch, url_ + " returned a vector of size " +
                                                       std::to_string(v.size()));
      }
    }
    return out;
  }

 private:
  std::string url_;
  std::size_t dimension_;
  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy retry_;
  Sleeper sleep_;
};

class HttpRerankProvider final : public RerankProvider {
 public:
  HttpRerankProvider(std::string url, std::shared_ptr<HttpTransport> transport,
                     RetryPolicy retry = {}, Sleeper sleep = real_sleeper())
      : url_(std::move(url)), transport_(std::move(transport)), retry_(retry),
        sleep_(std::move(sleep)) {}

  std::vector<double> rerank(std::string_view query,
                             std::span<const std::string> documents) const override {
    nlohmann::json body{{"query", std::string(query)},
                        {"documents", std::vector<std::string>(documents.begin(), documents.end())}};
    auto doc = detail::post_json(*transport_, url_, body, retry_, sleep_);
    try {
      return doc.at("scores").get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kProvider, url_ + " response has no numeric 'scores' list");
    }
  }

 private:
  std::string url_;
  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy retry_;
  Sleeper sleep_;
};

}  // namespace dualtrack
