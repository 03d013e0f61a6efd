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

// Two-stage candidate scoring: embedding cosine pre-filter, rerank
// refinement, weighted fusion, deterministic top-N selection.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dualtrack/error.hpp"
#include "dualtrack/text.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

using Embedding = std::vector<double>;

inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

// What gets scored: a full triple (verification, path hops) or a bare
// relation.
using CandidatePayload = std::variant<Triple, RelationRef>;

inline std::string verbalize(const CandidatePayload& p) {
  if (const auto* t = std::get_if<Triple>(&p)) return t->verbalize();
  return std::get<RelationRef>(p).display();
}

inline std::string payload_key(const CandidatePayload& p) {
  if (const auto* t = std::get_if<Triple>(&p)) return t->key();
  return std::get<RelationRef>(p).id;
}

inline const RelationRef& payload_relation(const CandidatePayload& p) {
  if (const auto* t = std::get_if<Triple>(&p)) return t->relation;
  return std::get<RelationRef>(p);
}

struct ScoredCandidate {
  CandidatePayload payload;
  double cos = 0.0;
  std::optional<double> rerank;
  std::optional<double> combined;
};

struct ScoringConfig {
  double alpha = 0.7;
  std::size_t top_n = 50;
  std::size_t dimension = 256;

  void validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "alpha must be in [0,1]");
    }
    if (top_n < 1) throw Error(ErrorCode::kInvalidArgument, "top_n must be >= 1");
    if (dimension < 1) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 1");
  }
};

// combined = alpha * rerank + (1 - alpha) * cos
inline ScoredCandidate fuse(ScoredCandidate c, const ScoringConfig& cfg) {
  if (!c.rerank) {
    throw Error(ErrorCode::kMissingStageScore, "rerank score not set for " + payload_key(c.payload));
  }
  c.combined = cfg.alpha * *c.rerank + (1.0 - cfg.alpha) * c.cos;
  return c;
}

enum class RankKey { kCos, kCombined };

inline double rank_value(const ScoredCandidate& c, RankKey key) {
  if (key == RankKey::kCos) return c.cos;
  if (!c.combined) {
    throw Error(ErrorCode::kMissingStageScore, "combined score not set for " + payload_key(c.payload));
  }
  return *c.combined;
}

// The n best by `key`, descending; equal scores ordered by payload key.
inline std::vector<ScoredCandidate> top_n(std::vector<ScoredCandidate> candidates,
                                          std::size_t n, RankKey key) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "top_n needs n >= 1");
  struct Keyed {
    double value;
    std::string id;
    std::size_t index;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    keyed.push_back({rank_value(candidates[i], key), payload_key(candidates[i].payload), i});
  }
  auto better = [](const Keyed& a, const Keyed& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.id < b.id;
  };
  std::size_t keep = std::min(n, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(keep),
                    keyed.end(), better);
  std::vector<ScoredCandidate> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(std::move(candidates[keyed[i].index]));
  return out;
}

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) const = 0;
};

// Scores in [0,1]; implementations may return anything, score_candidates
// clamps.
class RerankProvider {
 public:
  virtual ~RerankProvider() = default;
  virtual std::vector<double> rerank(std::string_view query,
                                     std::span<const std::string> documents) const = 0;
};

// Bag-of-words over hashed tokens. Deterministic and model-free.
class HashEmbedding final : public EmbeddingProvider {
 public:
  explicit HashEmbedding(std::size_t dimension = 256) : dimension_(dimension) {
    if (dimension_ == 0) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 1");
  }

  std::size_t dimension() const override { return dimension_; }

  static Embedding embed_one(std::string_view s, std::size_t dimension) {
    Embedding v(dimension, 0.0);
    for (const auto& token : text::tokenize(s)) {
      v[text::fnv1a64(token) % dimension] += 1.0;
    }
    return v;
  }

  std::vector<Embedding> embed(std::span<const std::string> texts) const override {
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t, dimension_));
    return out;
  }

 private:
  std::size_t dimension_;
};

class ConstantReranker final : public RerankProvider {
 public:
  explicit ConstantReranker(double value) : value_(value) {}

  std::vector<double> rerank(std::string_view, std::span<const std::string> docs) const override {
    calls_.fetch_add(1);
    documents_.fetch_add(docs.size());
    return std::vector<double>(docs.size(), value_);
  }

  std::size_t calls() const { return calls_.load(); }
  std::size_t documents_seen() const { return documents_.load(); }

 private:
  double value_;
  mutable std::atomic<std::size_t> calls_{0};
  mutable std::atomic<std::size_t> documents_{0};
};

// Token Jaccard between query and document.
class OverlapReranker final : public RerankProvider {
 public:
  std::vector<double> rerank(std::string_view query,
                             std::span<const std::string> docs) const override {
    std::vector<double> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(text::token_jaccard(query, d));
    return out;
  }
};

// Stage I keeps the cfg.top_n best by cosine; only those reach the reranker.
// Stage II fuses and the result is sorted by combined score.
inline std::vector<ScoredCandidate> score_candidates(std::string_view query,
                                                     const std::vector<CandidatePayload>& candidates,
                                                     const ScoringConfig& cfg,
                                                     const EmbeddingProvider& embedder,
                                                     const RerankProvider& reranker) {
  cfg.validate();
  if (candidates.empty()) return {};

  std::vector<std::string> texts;
  texts.reserve(candidates.size() + 1);
  texts.emplace_back(query);
  for (const auto& c : candidates) texts.push_back(verbalize(c));
  auto vectors = embedder.embed(texts);
  if (vectors.size() != texts.size()) {
    throw Error(ErrorCode::kProvider, "embedding provider returned " +
                                          std::to_string(vectors.size()) + " vectors for " +
                                          std::to_string(texts.size()) + " texts");
  }

  std::vector<ScoredCandidate> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ScoredCandidate c;
    c.payload = candidates[i];
    try {
      c.cos = cosine(vectors[0], vectors[i + 1]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroVector) throw;
      c.cos = 0.0;  // no shared vocabulary to compare
    }
    scored.push_back(std::move(c));
  }

  auto survivors = top_n(std::move(scored), cfg.top_n, RankKey::kCos);

  std::vector<std::string> docs;
  docs.reserve(survivors.size());
  for (const auto& c : survivors) docs.push_back(verbalize(c.payload));
  auto scores = reranker.rerank(query, docs);
  if (scores.size() != survivors.size()) {
    throw Error(ErrorCode::kProvider, "rerank provider returned " + std::to_string(scores.size()) +
                                          " scores for " + std::to_string(docs.size()) +
                                          " documents");
  }
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    survivors[i].rerank = std::clamp(scores[i], 0.0, 1.0);
    survivors[i] = fuse(std::move(survivors[i]), cfg);
  }
  const std::size_t count = survivors.size();
  return top_n(std::move(survivors), count, RankKey::kCombined);
}

}  // namespace dualtrack
