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

#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace dualtrack {
namespace {

RelationRef rel(int i) { return RelationRef{"P" + std::to_string(i), "relation " + std::to_string(i)}; }

ScoredCandidate candidate(int i, double cos, std::optional<double> rerank = std::nullopt) {
  ScoredCandidate c;
  c.payload = rel(i);
  c.cos = cos;
  c.rerank = rerank;
  return c;
}

TEST(Cosine, KnownValues) {
  std::vector<double> a{1, 0}, b{0, 1}, c{2, 0}, d{-1, 0};
  EXPECT_DOUBLE_EQ(cosine(a, c), 1.0);
  EXPECT_DOUBLE_EQ(cosine(a, b), 0.0);
  EXPECT_DOUBLE_EQ(cosine(a, d), -1.0);
}

TEST(Cosine, Errors) {
  std::vector<double> a{1, 0}, z{0, 0}, three{1, 2, 3};
  try {
    cosine(a, three);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  try {
    cosine(a, z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVector);
  }
}

TEST(Fuse, Examples) {
  ScoringConfig cfg;
  EXPECT_NEAR(*fuse(candidate(1, 0.6, 0.8), cfg).combined, 0.74, 1e-12);
  cfg.alpha = 1.0;
  EXPECT_DOUBLE_EQ(*fuse(candidate(1, 0.2, 0.8), cfg).combined, 0.8);
  cfg.alpha = 0.0;
  EXPECT_DOUBLE_EQ(*fuse(candidate(1, 0.6, 0.8), cfg).combined, 0.6);
  try {
    fuse(candidate(1, 0.5), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingStageScore);
  }
}

TEST(TopN, OrdersAndBreaksTiesById) {
  std::vector<ScoredCandidate> v{candidate(3, 0.5), candidate(1, 0.9), candidate(2, 0.5),
                                 candidate(4, 0.1)};
  auto out = top_n(v, 3, RankKey::kCos);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(payload_key(out[0].payload), "P1");
  EXPECT_EQ(payload_key(out[1].payload), "P2");
  EXPECT_EQ(payload_key(out[2].payload), "P3");
  EXPECT_EQ(top_n(v, 10, RankKey::kCos).size(), 4u);
  EXPECT_THROW(top_n(v, 0, RankKey::kCos), Error);
}

TEST(ScoringConfig, DefaultsAndValidation) {
  ScoringConfig cfg;
  EXPECT_EQ(cfg.top_n, 50u);
  EXPECT_DOUBLE_EQ(cfg.alpha, 0.7);
  cfg.alpha = 1.5;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(HashEmbedding, DeterministicAndTokenBased) {
  HashEmbedding e(64);
  std::vector<std::string> texts{"Inception director", "inception DIRECTOR", "spouse"};
  auto v = e.embed(texts);
  EXPECT_EQ(v[0], v[1]);
  EXPECT_EQ(v[0].size(), 64u);
  EXPECT_GT(cosine(v[0], v[1]), 0.999);
}

TEST(ScoreCandidates, StageTwoSeesOnlyTopN) {
  std::vector<CandidatePayload> payloads;
  for (int i = 0; i < 80; ++i) payloads.emplace_back(rel(i));
  ScoringConfig cfg;
  cfg.top_n = 50;
  testing::RecordingReranker reranker(0.5);
  HashEmbedding embedder(64);
  auto out = score_candidates("relation 7", payloads, cfg, embedder, reranker);
  EXPECT_EQ(reranker.calls(), 1u);
  EXPECT_EQ(reranker.max_batch(), 50u);
  EXPECT_EQ(out.size(), 50u);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GE(*out[i - 1].combined, *out[i].combined);
}

TEST(ScoreCandidates, ZeroVectorScoresZeroCosine) {
  std::vector<CandidatePayload> payloads{RelationRef{"P1", "!!!"}};
  ScoringConfig cfg;
  ConstantReranker reranker(1.0);
  HashEmbedding embedder(16);
  auto out = score_candidates("who", payloads, cfg, embedder, reranker);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].cos, 0.0);
  EXPECT_NEAR(*out[0].combined, 0.7, 1e-12);
}

TEST(ScoreCandidates, RerankClampedAndEmptyInput) {
  class Wild final : public RerankProvider {
   public:
    std::vector<double> rerank(std::string_view, std::span<const std::string> d) const override {
      return std::vector<double>(d.size(), 7.0);
    }
  } wild;
  HashEmbedding embedder(16);
  ScoringConfig cfg;
  auto out = score_candidates("relation", {CandidatePayload{rel(1)}}, cfg, embedder, wild);
  EXPECT_EQ(*out[0].rerank, 1.0);
  EXPECT_TRUE(score_candidates("q", {}, cfg, embedder, wild).empty());
}

TEST(HttpEmbeddingProvider, ChecksDimension) {
  auto transport = std::make_shared<testing::SequenceTransport>(
      std::vector<HttpResponse>{{200, R"({"embeddings":[[1,2,3]]})", ""}});
  HttpEmbeddingProvider e("http://e.invalid", 2, transport);
  std::vector<std::string> texts{"a"};
  EXPECT_THROW(e.embed(texts), Error);
}

TEST(HttpRerankProvider, ReadsScores) {
  auto transport = std::make_shared<testing::SequenceTransport>(
      std::vector<HttpResponse>{{200, R"({"scores":[0.25,0.5]})", ""}});
  HttpRerankProvider r("http://r.invalid", transport);
  std::vector<std::string> docs{"a", "b"};
  EXPECT_EQ(r.rerank("q", docs), (std::vector<double>{0.25, 0.5}));
  auto sent = nlohmann::json::parse(transport->last_body);
  EXPECT_EQ(sent["documents"].size(), 2u);
}

}  // namespace
}  // namespace dualtrack
