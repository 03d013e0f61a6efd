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

// Classifier, fact-verification track and path-search track.

#include <gtest/gtest.h>

#include "support.hpp"

namespace dualtrack {
namespace {

using testing::entry;
using testing::Rig;

// ---- classifier -----------------------------------------------------------

TEST(Classifier, YesRoutesToChainedNoToParallel) {
  auto prompts = PromptLibrary::defaults();
  StubProvider llm({entry("Question: \"A\"", "yes"), entry("Question: \"B\"", " No.")});
  auto a = classify(Question{"1", "A", {}}, llm, prompts);
  EXPECT_EQ(a.type, QuestionType::kChained);
  EXPECT_EQ(a.raw, "yes");
  EXPECT_EQ(classify(Question{"2", "B", {}}, llm, prompts).type, QuestionType::kParallel);
}

TEST(Classifier, UnparseableFallsBackToDefaultTrack) {
  auto prompts = PromptLibrary::defaults();
  StubProvider llm({}, StubProvider::Mode::kScripted, "maybe");
  Diagnostics diag;
  auto c = classify(Question{"1", "A", {}}, llm, prompts, QuestionType::kChained, &diag);
  EXPECT_TRUE(c.fallback);
  EXPECT_EQ(c.type, QuestionType::kChained);
  EXPECT_EQ(diag.warnings.size(), 1u);
  EXPECT_EQ(classify(Question{"1", "A", {}}, llm, prompts, QuestionType::kParallel).type,
            QuestionType::kParallel);
}

TEST(Classifier, EmptyQuestionIsInvalid) {
  auto prompts = PromptLibrary::defaults();
  StubProvider llm;
  EXPECT_THROW(classify(Question{"1", "", {}}, llm, prompts), Error);
  EXPECT_EQ(llm.calls(), 0u);
}

TEST(Classifier, PromptEndsWithTheQuestionSlot) {
  auto prompts = PromptLibrary::defaults();
  auto stub = StubProvider::echo();
  auto c = classify(Question{"1", "Who?", {}}, stub, prompts);
  EXPECT_NE(c.raw.find("Question: \"Who?\"\n    Judgment (yes/no): "), std::string::npos);
}

// ---- linking and decomposition ---------------------------------------------

TEST(LinkEntity, ExactThenFuzzy) {
  auto kg = InMemoryStore::from_string(testing::kParallelFixture);
  EXPECT_EQ(link_entity("Inception", kg).id, "QF1");
  EXPECT_EQ(link_entity("Christopher Nolen", kg).id, "QF2");
  EXPECT_EQ(link_entity("christopher nolan", kg).id, "QF2");
  EXPECT_THROW(link_entity("Titanic", kg), Error);
  EXPECT_THROW(link_entity("", kg), Error);
}

TEST(Decomposition, ParsesFactAndSubject) {
  Diagnostics diag;
  auto facts = parse_decomposition(
      "1. Inception was directed by Nolan. | Inception\n"
      "- \"nolan was born in 1970.\" | Nolan\n"
      "A fact with no subject\n"
      "Paris is big | London\n",
      &diag);
  ASSERT_EQ(facts.size(), 4u);
  EXPECT_EQ(facts[0].text, "Inception was directed by Nolan.");
  EXPECT_EQ(facts[0].subject_surface, "Inception");
  EXPECT_EQ(facts[1].subject_surface, "nolan");
  EXPECT_EQ(facts[2].subject_surface, "");
  EXPECT_EQ(facts[3].subject_surface, "");
  EXPECT_EQ(facts[3].origin_index, 3);
  EXPECT_EQ(diag.warnings.size(), 1u);
}

TEST(Decomposition, EmptyResponseMakesNoCall) {
  Rig rig(InMemoryStore{}, {});
  EXPECT_TRUE(decompose("  ", rig.services()).empty());
  EXPECT_EQ(rig.llm.calls(), 0u);
}

// ---- fact verification -----------------------------------------------------

VerifyConfig verify_config() { return VerifyConfig{}; }

TEST(VerifyFact, VerifiedRevisedAndUnverifiable) {
  Rig rig(InMemoryStore::from_string(testing::kParallelFixture), testing::parallel_script());
  Question q{"p", testing::kParallelQuestion, {}};
  auto s = rig.services();

  auto ok = verify_fact(AtomicFact{testing::kFactDirector, "Inception", 0}, verify_config(), q, s);
  EXPECT_EQ(ok.status, VerificationStatus::kVerified);
  EXPECT_EQ(ok.linked_entity, "QF1");
  EXPECT_FALSE(ok.best_triples.empty());
  EXPECT_LE(ok.best_triples.size(), 3u);

  auto fixed = verify_fact(AtomicFact{testing::kFactBirth, "Christopher Nolan", 1}, verify_config(), q, s);
  EXPECT_EQ(fixed.status, VerificationStatus::kRevised);
  EXPECT_EQ(fixed.revised_text, testing::kFactBirthFixed);

  auto unknown = verify_fact(AtomicFact{"Titanic sank in 1912.", "Titanic", 2}, verify_config(), q, s);
  EXPECT_EQ(unknown.status, VerificationStatus::kUnverifiable);
  EXPECT_TRUE(unknown.best_triples.empty());
}

TEST(VerifyFact, UnchangedRewriteIsUnverifiable) {
  auto script = testing::parallel_script();
  script.push_back(entry("Fact: " + std::string(testing::kFactBirth) + "\nRewritten fact:",
                         testing::kFactBirth));
  Rig rig(InMemoryStore::from_string(testing::kParallelFixture), script);
  Question q{"p", testing::kParallelQuestion, {}};
  auto r = verify_fact(AtomicFact{testing::kFactBirth, "Christopher Nolan", 0}, verify_config(), q,
                       rig.services());
  EXPECT_EQ(r.status, VerificationStatus::kUnverifiable);
}

TEST(ParallelBranch, EndToEnd) {
  Rig rig(InMemoryStore::from_string(testing::kParallelFixture), testing::parallel_script());
  Question q{"p", testing::kParallelQuestion, {}};
  auto a = run_parallel_branch(q, verify_config(), rig.services());
  EXPECT_EQ(a.track, QuestionType::kParallel);
  ASSERT_EQ(a.verifications.size(), 2u);
  EXPECT_EQ(a.verifications[0].status, VerificationStatus::kVerified);
  EXPECT_EQ(a.verifications[1].status, VerificationStatus::kRevised);
  EXPECT_NE(a.text.find("1970-07-30"), std::string::npos);
  EXPECT_FALSE(a.has_flag(flags::kUnverified));
}

TEST(ParallelBranch, AllVerifiedReturnsDraftWithoutSynthesis) {
  auto script = testing::parallel_script();
  script.push_back(entry("Fact: " + std::string(testing::kFactBirth) + "\nSupported (yes/no):", "yes"));
  Rig rig(InMemoryStore::from_string(testing::kParallelFixture), script);
  Question q{"p", testing::kParallelQuestion, {}};
  auto a = run_parallel_branch(q, verify_config(), rig.services());
  EXPECT_EQ(a.text, a.draft);
  for (const auto& p : rig.llm.prompts()) EXPECT_EQ(p.find("Verification results:"), std::string::npos);
}

TEST(ParallelBranch, NothingGroundedIsFlagged) {
  Rig rig(InMemoryStore{}, testing::parallel_script());
  Question q{"p", testing::kParallelQuestion, {}};
  auto a = run_parallel_branch(q, verify_config(), rig.services());
  EXPECT_TRUE(a.has_flag(flags::kUnverified));
  EXPECT_EQ(a.text, a.draft);
}

// ---- path search -----------------------------------------------------------

Rig chain_rig(std::vector<ScriptEntry> script = testing::chain_script()) {
  return Rig(InMemoryStore::from_string(testing::kChainFixture), std::move(script), "",
             std::make_unique<ConstantReranker>(1.0));
}

TEST(PathScore, Examples) {
  ReasoningPath p{EntityRef{"Q1", "a"}, {}};
  EXPECT_DOUBLE_EQ(path_score(p), 1.0);
  auto one = p.extended(Hop{RelationRef{"P1", "r"}, HopDirection::kHead, EntityRef{"Q2", "b"}, 0.9});
  EXPECT_DOUBLE_EQ(path_score(one), 0.9);
  auto two = one.extended(Hop{RelationRef{"P2", "s"}, HopDirection::kTail, EntityRef{"Q3", "c"}, 0.8});
  EXPECT_NEAR(path_score(two), 0.72, 1e-12);
  EXPECT_EQ(two.verbalize(), "a --r--> b <--s-- c");
  auto triples = two.triples();
  EXPECT_EQ(triples[1].subject.id, "Q3");
  EXPECT_EQ(object_id(triples[1].object), "Q2");
}

TEST(CentralEntity, ExtractAndLink) {
  auto rig = chain_rig();
  Question q{"c", testing::kChainQuestion, {}};
  EXPECT_EQ(extract_central_entity(q, rig.services()).id, "QF1");
  auto miss = chain_rig({entry("Central entity:", "Titanic")});
  EXPECT_THROW(extract_central_entity(q, miss.services()), Error);
}

TEST(ParseSelection, MarkersNumbersAndNames) {
  std::vector<std::string> labels{"director", "spouse", "genre", "award"};
  EXPECT_EQ(parse_selection("[2] [4]", labels, 3), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(parse_selection("1, 3 and 9", labels, 3), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(parse_selection("spouse and genre", labels, 3), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(parse_selection("[1][2][3][4]", labels, 3).size(), 3u);
  EXPECT_TRUE(parse_selection("none", labels, 3).empty());
}

ChainConfig chain_config() {
  ChainConfig cfg;
  return cfg;
}

TEST(Expand, ThresholdAndWidth) {
  // Four relations scoring 0.9, 0.7, 0.4, 0.2 with theta 0.5.
  InMemoryStore kg;
  const std::vector<std::pair<std::string, double>> rels{
      {"alpha", 0.9}, {"beta", 0.7}, {"gamma", 0.4}, {"delta", 0.2}};
  std::map<std::string, double> table;
  int i = 0;
  for (const auto& [label, score] : rels) {
    ++i;
    kg.add(Triple{EntityRef{"Q1", "hub"}, RelationRef{"P" + std::to_string(i), label},
                  EntityRef{"Q" + std::to_string(10 + i), "n" + std::to_string(i)}});
    table[label] = score;
  }
  Rig rig(std::move(kg), {});
  rig.embedder = std::make_unique<testing::ConstantEmbedding>();
  rig.reranker = std::make_unique<testing::TableReranker>(table);
  ChainConfig cfg;
  cfg.scoring.alpha = 1.0;
  cfg.denoise.theta_necessity = 0.0;
  cfg.search.theta_search = 0.5;
  Question q{"x", "anything", {}};
  ReasoningPath root{EntityRef{"Q1", "hub"}, {}};
  auto out = expand(root, q, cfg, rig.services());
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].hops[0].relation.label, "alpha");
  EXPECT_DOUBLE_EQ(out[0].hops[0].relation_score, 0.9);
  EXPECT_EQ(out[1].hops[0].relation.label, "beta");

  cfg.search.theta_search = 0.95;
  EXPECT_TRUE(expand(root, q, cfg, rig.services()).empty());

  cfg.search.theta_search = 0.0;
  cfg.search.w_max = 3;
  EXPECT_EQ(expand(root, q, cfg, rig.services()).size(), 3u);
}

TEST(Expand, LlmSelectionPicksAtMostThree) {
  InMemoryStore kg;
  const std::vector<std::string> names{"alpha", "bravo", "charlie", "delta", "echo",
                                       "foxtrot", "golf", "hotel", "india", "juliet"};
  for (int i = 1; i <= 10; ++i) {
    kg.add(Triple{EntityRef{"Q1", "hub"}, RelationRef{"P" + std::to_string(i), names[i - 1]},
                  EntityRef{"Q" + std::to_string(100 + i), "n" + std::to_string(i)}});
  }
  Rig rig(std::move(kg), {entry("Selected:", "golf, bravo and india")});
  rig.embedder = std::make_unique<testing::ConstantEmbedding>();
  rig.reranker = std::make_unique<ConstantReranker>(0.8);
  ChainConfig cfg;
  cfg.denoise.theta_necessity = 0.0;
  cfg.search.w_max = 10;
  cfg.search.llm_select_trigger = 5;
  Question q{"x", "anything", {}};
  auto out = expand(ReasoningPath{EntityRef{"Q1", "hub"}, {}}, q, cfg, rig.services());
  std::set<std::string> labels;
  for (const auto& p : out) labels.insert(p.hops[0].relation.label);
  EXPECT_EQ(labels, (std::set<std::string>{"bravo", "golf", "india"}));
}

TEST(Expand, CycleGuardAndLiteralTip) {
  auto rig = chain_rig();
  Question q{"c", testing::kChainQuestion, {}};
  ChainConfig cfg;
  ReasoningPath p{EntityRef{"QF1", "Inception"}, {}};
  auto first = expand(p, q, cfg, rig.services());
  for (const auto& child : first) {
    for (const auto& grand : expand(child, q, cfg, rig.services())) {
      EXPECT_NE(object_id(grand.tip()), "QF1");
    }
  }
  auto literal = p.extended(Hop{RelationRef{"PF3", "birthdate"}, HopDirection::kHead,
                                Literal{"1975-05-26", ""}, 1.0});
  EXPECT_TRUE(expand(literal, q, cfg, rig.services()).empty());
}

TEST(Sufficiency, UnparseableIsFalse) {
  auto rig = chain_rig({entry("Sufficient (yes/no):", "perhaps")});
  Question q{"c", testing::kChainQuestion, {}};
  Diagnostics diag;
  EXPECT_FALSE(check_sufficiency(ReasoningPath{EntityRef{"QF1", "Inception"}, {}}, q,
                                 rig.services(), &diag));
  EXPECT_EQ(diag.warnings.size(), 1u);
}

TEST(ChainBranch, EndToEnd) {
  auto rig = chain_rig();
  Question q{"c", testing::kChainQuestion, {}};
  SearchResult search;
  auto a = run_chain_branch(q, chain_config(), rig.services(), &search);
  EXPECT_NE(a.text.find("1975-05-26"), std::string::npos);
  ASSERT_EQ(a.supporting_paths.size(), 1u);
  EXPECT_EQ(a.supporting_paths[0].depth(), 3u);
  EXPECT_FALSE(a.has_flag(flags::kInsufficient));
  ASSERT_TRUE(search.sufficient);
  // Only P* reaches the generator.
  auto prompts = rig.llm.prompts();
  const auto& last = prompts.back();
  EXPECT_NE(last.find("(Emma Thomas, birthdate, 1975-05-26)"), std::string::npos);
  EXPECT_EQ(last.find("science fiction"), std::string::npos);
}

TEST(ChainBranch, DepthOneIsInsufficient) {
  auto rig = chain_rig();
  Question q{"c", testing::kChainQuestion, {}};
  auto cfg = chain_config();
  cfg.search.d_max = 1;
  SearchResult search;
  auto a = run_chain_branch(q, cfg, rig.services(), &search);
  EXPECT_TRUE(a.has_flag(flags::kInsufficient));
  for (const auto& p : search.emitted) EXPECT_LE(p.depth(), 1u);
}

TEST(ChainBranch, NoRelationsIsInsufficient) {
  Rig rig(InMemoryStore::from_string("QF9|Lonely|PF1|r|QF8|Other\n"),
          {entry("Central entity:", "Other")});
  Question q{"c", "What about Other?", {}};
  auto a = run_chain_branch(q, chain_config(), rig.services());
  // Other has one incoming triple; its subject becomes a dead-end path.
  EXPECT_TRUE(a.has_flag(flags::kInsufficient));
  Rig bare(InMemoryStore::from_string("QF9|Lonely|PF1|r|1|1\n"), {entry("Central entity:", "Lonely")});
  bare.reranker = std::make_unique<ConstantReranker>(0.0);
  auto b = run_chain_branch(q, chain_config(), bare.services());
  EXPECT_TRUE(b.has_flag(flags::kInsufficient));
  EXPECT_TRUE(b.supporting_paths.empty());
}

TEST(ChainBranch, UnlinkableEntity) {
  auto rig = chain_rig({entry("Central entity:", "Titanic")});
  auto a = run_chain_branch(Question{"c", "Who?", {}}, chain_config(), rig.services());
  EXPECT_TRUE(a.has_flag(flags::kNoCentralEntity));
  EXPECT_TRUE(a.has_flag(flags::kInsufficient));
}

TEST(ChainBranch, BudgetExhaustion) {
  auto rig = chain_rig({entry("Central entity:", "Inception"), entry("Answer:", "unknown")});
  auto cfg = chain_config();
  cfg.search.expand_budget = 1;
  SearchResult search;
  auto a = run_chain_branch(Question{"c", testing::kChainQuestion, {}}, cfg, rig.services(), &search);
  EXPECT_TRUE(a.has_flag(flags::kBudgetExhausted));
  EXPECT_EQ(search.expand_calls, 1u);
}

TEST(ChainBranch, LeafModeChecksOnlyCompletedPaths) {
  auto rig = chain_rig();
  auto cfg = chain_config();
  cfg.search.sufficiency_mode = SufficiencyMode::kLeaf;
  auto a = run_chain_branch(Question{"c", testing::kChainQuestion, {}}, cfg, rig.services());
  ASSERT_EQ(a.supporting_paths.size(), 1u);
  EXPECT_EQ(a.supporting_paths[0].depth(), 3u);
}

}  // namespace
}  // namespace dualtrack
