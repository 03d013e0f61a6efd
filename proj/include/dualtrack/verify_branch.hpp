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

// Parallel fact-verification track. A draft answer is split into atomic
// facts; each fact is grounded against the KG on its own (link subject,
// retrieve its triples, denoise, score, judge) and either verified or
// rewritten. The corrected facts are then folded back into the answer.

#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "dualtrack/denoiser.hpp"
#include "dualtrack/error.hpp"
#include "dualtrack/evidence.hpp"
#include "dualtrack/prompts.hpp"
#include "dualtrack/scorer.hpp"
#include "dualtrack/services.hpp"
#include "dualtrack/text.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

struct VerifyConfig {
  ScoringConfig scoring;
  DenoiseConfig denoise;
  std::size_t top_k = 3;     // triples compared against each fact
  double link_floor = 0.8;   // minimum similarity for fuzzy linking
};

inline std::string draft_response(const Question& q, const Services& s) {
  return std::string(text::trim(ask(s.llm, s.prompts, prompt_names::kDraftAnswer,
                                    {{"question", q.text}})));
}

// Parses "fact | subject" lines. Lines without a separator become facts with
// no subject. A subject that does not occur in its fact is matched
// case-insensitively and replaced by the fact's own spelling, or dropped.
inline std::vector<AtomicFact> parse_decomposition(std::string_view reply,
                                                   Diagnostics* diag = nullptr) {
  std::vector<AtomicFact> facts;
  for (const auto& raw : text::split_lines(reply)) {
    auto line = strip_list_marker(raw);
    if (line.empty()) continue;
    AtomicFact f;
    auto bar = line.rfind('|');
    if (bar == std::string_view::npos) {
      f.text = std::string(strip_quotes(line));
    } else {
      f.text = std::string(strip_quotes(line.substr(0, bar)));
      f.subject_surface = std::string(strip_quotes(line.substr(bar + 1)));
    }
    if (f.text.empty()) continue;
    if (!f.subject_surface.empty() && f.text.find(f.subject_surface) == std::string::npos) {
      auto pos = text::to_lower(f.text).find(text::to_lower(f.subject_surface));
      if (pos != std::string::npos) {
        f.subject_surface = f.text.substr(pos, f.subject_surface.size());
      } else {
        warn(diag, "subject '" + f.subject_surface + "' not found in fact '" + f.text + "'");
        f.subject_surface.clear();
      }
    }
    f.origin_index = static_cast<int>(facts.size());
    facts.push_back(std::move(f));
  }
  return facts;
}

inline std::vector<AtomicFact> decompose(std::string_view response, const Services& s,
                                         Diagnostics* diag = nullptr) {
  if (text::trim(response).empty()) return {};
  auto reply = ask(s.llm, s.prompts, prompt_names::kDecompose,
                   {{"response", std::string(response)}});
  return parse_decomposition(reply, diag);
}

inline std::string format_triples(const std::vector<Triple>& triples) {
  std::vector<std::string> lines;
  for (const auto& t : triples) lines.push_back(format_triple(t));
  return text::join(lines, "\n");
}

// `q` supplies the context for necessity scoring only; the fact itself is the
// scoring query.
inline VerificationResult verify_fact(const AtomicFact& fact, const VerifyConfig& cfg,
                                      const Question& q, const Services& s,
                                      Diagnostics* diag = nullptr) {
  VerificationResult result;
  result.fact = fact;

  EntityRef entity;
  try {
    entity = link_entity(fact.subject_surface, s.kg, cfg.link_floor);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kLinkFailure && e.code() != ErrorCode::kInvalidArgument) throw;
    warn(diag, "fact " + std::to_string(fact.origin_index) + ": " + e.what());
    return result;
  }
  result.linked_entity = entity.id;

  std::vector<CandidatePayload> candidates;
  std::unordered_set<std::string> seen;
  for (auto& t : s.kg.relations(entity).all()) {
    if (seen.insert(t.key()).second) candidates.emplace_back(std::move(t));
  }
  auto relation_of = [](const auto& item) -> const RelationRef& {
    if constexpr (std::is_same_v<std::decay_t<decltype(item)>, ScoredCandidate>) {
      return payload_relation(item.payload);
    } else {
      return payload_relation(item);
    }
  };
  candidates = apply_rule_layer(std::move(candidates), cfg.denoise, relation_of, diag);
  auto scored = score_candidates(fact.text, candidates, cfg.scoring, s.embedder, s.reranker);
  scored = apply_necessity_layer(std::move(scored), q, cfg.denoise, s.llm, s.prompts,
                                 relation_of, diag);
  for (std::size_t i = 0; i < scored.size() && i < cfg.top_k; ++i) {
    result.best_triples.push_back(std::get<Triple>(scored[i].payload));
  }
  if (result.best_triples.empty()) return result;

  auto triples_text = format_triples(result.best_triples);
  auto judgment = ask(s.llm, s.prompts, prompt_names::kJudgeFact,
                      {{"fact", fact.text}, {"triples", triples_text}}, 8);
  bool supported = false;
  try {
    supported = parse_yes_no(judgment);
  } catch (const Error&) {
    warn(diag, "fact " + std::to_string(fact.origin_index) + ": unparseable judgment");
    return result;
  }
  if (supported) {
    result.status = VerificationStatus::kVerified;
    return result;
  }
  auto rewritten = std::string(text::trim(ask(s.llm, s.prompts, prompt_names::kRewriteFact,
                                              {{"fact", fact.text}, {"triples", triples_text}})));
  if (rewritten.empty() || rewritten == fact.text) {
    warn(diag, "fact " + std::to_string(fact.origin_index) +
                   ": rewrite produced no change; left unverifiable");
    return result;
  }
  result.status = VerificationStatus::kRevised;
  result.revised_text = std::move(rewritten);
  return result;
}

inline std::string format_verifications(const std::vector<VerificationResult>& results) {
  std::vector<std::string> lines;
  for (const auto& r : results) {
    std::string line = std::to_string(r.fact.origin_index + 1) + ". ";
    switch (r.status) {
      case VerificationStatus::kVerified: line += "VERIFIED: " + r.fact.text; break;
      case VerificationStatus::kRevised:
        line += "REVISED: " + r.fact.text + " => " + r.revised_text;
        break;
      case VerificationStatus::kUnverifiable: line += "UNVERIFIABLE: " + r.fact.text; break;
    }
    lines.push_back(std::move(line));
  }
  return text::join(lines, "\n");
}

inline Answer run_parallel_branch(const Question& q, const VerifyConfig& cfg, const Services& s) {
  Answer answer;
  answer.question_id = q.id;
  answer.track = QuestionType::kParallel;
  Diagnostics diag;

  answer.draft = draft_response(q, s);
  auto facts = decompose(answer.draft, s, &diag);
  bool any_grounded = false;
  bool any_revised = false;
  for (const auto& f : facts) {
    answer.verifications.push_back(verify_fact(f, cfg, q, s, &diag));
    const auto status = answer.verifications.back().status;
    any_grounded |= status != VerificationStatus::kUnverifiable;
    any_revised |= status == VerificationStatus::kRevised;
  }

  if (!any_grounded) {
    answer.text = answer.draft;
    answer.flags.insert(flags::kUnverified);
  } else if (!any_revised) {
    answer.text = answer.draft;
  } else {
    answer.text = std::string(text::trim(ask(
        s.llm, s.prompts, prompt_names::kSynthesize,
        {{"question", q.text},
         {"draft", answer.draft},
         {"verifications", format_verifications(answer.verifications)}})));
  }
  answer.warnings = std::move(diag.warnings);
  return answer;
}

}  // namespace dualtrack
