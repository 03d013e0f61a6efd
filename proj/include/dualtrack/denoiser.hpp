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

// Two removal layers for candidate relations:
//  - rule layer: drop relations whose label contains an administrative
//    keyword ("id", "source", ...), no model involved;
//  - necessity layer: ask the LLM how necessary the relation is for the
//    question and drop those under theta_necessity.
// Both layers keep an item whenever they cannot decide (missing label, bad
// reply, provider failure) and record a warning.

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dualtrack/error.hpp"
#include "dualtrack/llm.hpp"
#include "dualtrack/prompts.hpp"
#include "dualtrack/scorer.hpp"
#include "dualtrack/text.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

struct DenoiseConfig {
  std::vector<std::string> k_invalid{"id", "source", "version", "metadata"};
  double theta_necessity = 0.5;

  void validate() const {
    for (const auto& k : k_invalid) {
      if (k.empty()) throw Error(ErrorCode::kInvalidArgument, "empty k_invalid keyword");
    }
    if (!(theta_necessity >= 0.0 && theta_necessity <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "theta_necessity must be in [0,1]");
    }
  }
};

// True when the relation should be dropped.
inline bool rule_filter(const RelationRef& relation, const DenoiseConfig& cfg,
                        Diagnostics* diag = nullptr) {
  if (relation.label.empty()) {
    warn(diag, "relation " + relation.id + " has no label; kept by rule filter");
    return false;
  }
  for (const auto& keyword : cfg.k_invalid) {
    if (text::contains_folded(relation.label, keyword)) return true;
  }
  return false;
}

// Necessity of `relation` for answering `q`, in [0,1]. An unparseable reply
// counts as fully necessary. Provider failures propagate.
inline double necessity_score(const RelationRef& relation, const Question& q,
                              const LlmProvider& llm, const PromptLibrary& prompts,
                              Diagnostics* diag = nullptr) {
  auto reply = ask(llm, prompts, prompt_names::kNecessity,
                   {{"relation", relation.display()}, {"question", q.text}}, 16);
  try {
    return parse_unit_score(reply);
  } catch (const Error&) {
    warn(diag, "unparseable necessity score for '" + relation.display() + "'; kept");
    return 1.0;
  }
}

template <typename T, typename RelationOf>
std::vector<T> apply_rule_layer(std::vector<T> items, const DenoiseConfig& cfg,
                                RelationOf&& relation_of, Diagnostics* diag = nullptr) {
  std::vector<T> kept;
  kept.reserve(items.size());
  for (auto& item : items) {
    if (!rule_filter(relation_of(item), cfg, diag)) kept.push_back(std::move(item));
  }
  return kept;
}

// With theta_necessity == 0 every score passes, so no LLM call is made.
// Scores are memoised per relation label within one call.
template <typename T, typename RelationOf>
std::vector<T> apply_necessity_layer(std::vector<T> items, const Question& q,
                                     const DenoiseConfig& cfg, const LlmProvider& llm,
                                     const PromptLibrary& prompts, RelationOf&& relation_of,
                                     Diagnostics* diag = nullptr) {
  if (cfg.theta_necessity <= 0.0) return items;
  std::map<std::string, double> memo;
  std::vector<T> kept;
  kept.reserve(items.size());
  for (auto& item : items) {
    const RelationRef& relation = relation_of(item);
    const std::string& label = relation.display();
    auto it = memo.find(label);
    if (it == memo.end()) {
      double score = 1.0;
      try {
        score = necessity_score(relation, q, llm, prompts, diag);
      } catch (const Error& e) {
        warn(diag, "necessity scoring failed for '" + label + "' (" + e.what() + "); kept");
      }
      it = memo.emplace(label, score).first;
    }
    if (it->second >= cfg.theta_necessity) kept.push_back(std::move(item));
  }
  return kept;
}

// Rule layer, then necessity layer. Survivors keep their input order.
inline std::vector<CandidatePayload> denoise(std::vector<CandidatePayload> candidates,
                                             const Question& q, const DenoiseConfig& cfg,
                                             const LlmProvider& llm, const PromptLibrary& prompts,
                                             Diagnostics* diag = nullptr) {
  cfg.validate();
  auto relation_of = [](const CandidatePayload& p) -> const RelationRef& {
    return payload_relation(p);
  };
  auto kept = apply_rule_layer(std::move(candidates), cfg, relation_of, diag);
  return apply_necessity_layer(std::move(kept), q, cfg, llm, prompts, relation_of, diag);
}

}  // namespace dualtrack
