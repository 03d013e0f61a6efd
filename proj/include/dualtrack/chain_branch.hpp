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

// Chained multi-hop track. Starting from the question's central entity, the
// search grows reasoning paths depth-first. Each expansion scores the tip's
// head and tail relations against the question and keeps only:
//   - hops scoring at least theta_search,
//   - the w_max best of those,
//   - at most three picked by the LLM when more than llm_select_trigger remain.
// Paths never revisit an entity and never exceed d_max hops. The search stops
// as soon as the LLM judges a path sufficient to answer the question; the
// answer is then generated from the triples of the best paths only.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <unordered_map>
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

enum class SufficiencyMode {
  kExpansion,  // check every path as the search reaches it
  kLeaf,       // check only paths that cannot be extended further
};

inline std::string_view to_string(SufficiencyMode m) {
  return m == SufficiencyMode::kExpansion ? "expansion" : "leaf";
}

inline SufficiencyMode parse_sufficiency_mode(std::string_view s) {
  if (s == "expansion") return SufficiencyMode::kExpansion;
  if (s == "leaf") return SufficiencyMode::kLeaf;
  throw Error(ErrorCode::kInvalidArgument, "sufficiency_mode must be 'expansion' or 'leaf'");
}

struct SearchConfig {
  std::size_t d_max = 3;
  std::size_t w_max = 5;
  double theta_search = 0.3;
  std::size_t llm_select_trigger = 8;
  std::size_t max_selected = 3;
  bool llm_selection = true;
  std::size_t top_k_paths = 3;
  std::size_t expand_budget = 500;
  SufficiencyMode sufficiency_mode = SufficiencyMode::kExpansion;

  void validate() const {
    if (d_max < 1) throw Error(ErrorCode::kInvalidArgument, "d_max must be >= 1");
    if (w_max < 1) throw Error(ErrorCode::kInvalidArgument, "w_max must be >= 1");
    if (!(theta_search >= 0.0 && theta_search <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "theta_search must be in [0,1]");
    }
    if (top_k_paths < 1) throw Error(ErrorCode::kInvalidArgument, "top_k_paths must be >= 1");
    if (max_selected < 1) throw Error(ErrorCode::kInvalidArgument, "max_selected must be >= 1");
  }
};

struct ChainConfig {
  SearchConfig search;
  ScoringConfig scoring;
  DenoiseConfig denoise;
  double link_floor = 0.8;
};

// Reply of the central-entity prompt: first non-empty line, unquoted, without
// a trailing period.
inline std::string parse_entity_reply(std::string_view reply) {
  for (const auto& line : text::split_lines(reply)) {
    auto s = strip_quotes(strip_list_marker(line));
    while (!s.empty() && (s.back() == '.' || s.back() == ',')) s.remove_suffix(1);
    s = strip_quotes(s);
    if (!s.empty()) return std::string(s);
  }
  return {};
}

inline EntityRef extract_central_entity(const Question& q, const Services& s,
                                        double link_floor = 0.8) {
  auto reply = ask(s.llm, s.prompts, prompt_names::kExtractEntity, {{"question", q.text}}, 32);
  return link_entity(parse_entity_reply(reply), s.kg, link_floor);
}

// Indices (0-based) chosen by the selection reply, in reply order. Accepts
// "[n]" markers, bare numbers, or relation names, in that order of
// preference.
inline std::vector<std::size_t> parse_selection(std::string_view reply,
                                                const std::vector<std::string>& relation_labels,
                                                std::size_t limit) {
  const std::size_t n = relation_labels.size();
  std::vector<std::size_t> picked;
  std::set<std::size_t> seen;
  auto take = [&](std::size_t index) {
    if (picked.size() < limit && seen.insert(index).second) picked.push_back(index);
  };

  auto scan_numbers = [&](bool bracketed) {
    for (std::size_t i = 0; i < reply.size(); ++i) {
      if (reply[i] < '0' || reply[i] > '9') continue;
      if (i > 0 && reply[i - 1] >= '0' && reply[i - 1] <= '9') continue;
      std::size_t j = i;
      while (j < reply.size() && reply[j] >= '0' && reply[j] <= '9') ++j;
      bool in_brackets = i > 0 && reply[i - 1] == '[' && j < reply.size() && reply[j] == ']';
      if (bracketed && !in_brackets) continue;
      auto value = std::stoull(std::string(reply.substr(i, std::min<std::size_t>(j - i, 9))));
      if (value >= 1 && value <= n) take(static_cast<std::size_t>(value - 1));
    }
  };
  scan_numbers(true);
  if (!picked.empty()) return picked;
  scan_numbers(false);
  if (!picked.empty()) return picked;

  auto folded = text::to_lower(reply);
  std::vector<std::pair<std::size_t, std::size_t>> hits;  // (position, index)
  for (std::size_t i = 0; i < n; ++i) {
    if (relation_labels[i].empty()) continue;
    auto pos = folded.find(text::to_lower(relation_labels[i]));
    if (pos != std::string::npos) hits.emplace_back(pos, i);
  }
  std::sort(hits.begin(), hits.end());
  for (const auto& [pos, index] : hits) take(index);
  return picked;
}

namespace detail {

struct HopCandidate {
  HopDirection direction;
  ObjectValue next;
};

inline const RelationRef& scored_relation(const ScoredCandidate& c) {
  return payload_relation(c.payload);
}

}  // namespace detail

// One expansion step from the path's tip. Returns the extended paths in
// descending hop-score order; empty at a dead end.
inline std::vector<ReasoningPath> expand(const ReasoningPath& path, const Question& q,
                                         const ChainConfig& cfg, const Services& s,
                                         Diagnostics* diag = nullptr) {
  cfg.search.validate();
  if (path.depth() >= cfg.search.d_max) {
    throw Error(ErrorCode::kInvalidArgument, "cannot expand a path already at d_max");
  }
  auto tip = path.tip();
  const auto* tip_entity = std::get_if<EntityRef>(&tip);
  if (tip_entity == nullptr) return {};

  auto relations = s.kg.relations(*tip_entity);
  std::vector<CandidatePayload> payloads;
  std::unordered_map<std::string, detail::HopCandidate> hop_of;
  auto consider = [&](Triple t, HopDirection dir) {
    ObjectValue next = dir == HopDirection::kHead ? t.object : ObjectValue{t.subject};
    if (is_entity(next) && path.visits(object_id(next))) return;
    auto key = t.key();
    if (!hop_of.emplace(key, detail::HopCandidate{dir, next}).second) return;
    payloads.emplace_back(std::move(t));
  };
  for (auto& t : relations.head) consider(std::move(t), HopDirection::kHead);
  for (auto& t : relations.tail) consider(std::move(t), HopDirection::kTail);

  auto relation_of = [](const CandidatePayload& p) -> const RelationRef& {
    return payload_relation(p);
  };
  payloads = apply_rule_layer(std::move(payloads), cfg.denoise, relation_of, diag);
  auto scored = score_candidates(q.text, payloads, cfg.scoring, s.embedder, s.reranker);

  std::vector<ScoredCandidate> kept;
  for (auto& c : scored) {
    if (*c.combined >= cfg.search.theta_search) kept.push_back(std::move(c));
  }
  kept = apply_necessity_layer(std::move(kept), q, cfg.denoise, s.llm, s.prompts,
                               detail::scored_relation, diag);
  if (kept.size() > cfg.search.w_max) kept.resize(cfg.search.w_max);

  if (cfg.search.llm_selection && kept.size() > cfg.search.llm_select_trigger) {
    std::vector<std::string> lines;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      lines.push_back("[" + std::to_string(i + 1) + "] " +
                      format_triple(std::get<Triple>(kept[i].payload)));
      labels.push_back(detail::scored_relation(kept[i]).display());
    }
    auto reply = ask(s.llm, s.prompts, prompt_names::kSelectRelations,
                     {{"question", q.text},
                      {"path", path.verbalize()},
                      {"candidates", text::join(lines, "\n")}},
                     64);
    auto chosen = parse_selection(reply, labels, cfg.search.max_selected);
    std::vector<ScoredCandidate> selected;
    if (chosen.empty()) {
      warn(diag, "relation selection reply matched no candidate; keeping the best " +
                     std::to_string(cfg.search.max_selected));
      for (std::size_t i = 0; i < cfg.search.max_selected; ++i) selected.push_back(kept[i]);
    } else {
      std::sort(chosen.begin(), chosen.end());  // keep score order
      for (auto i : chosen) selected.push_back(kept[i]);
    }
    kept = std::move(selected);
  }

  std::vector<ReasoningPath> out;
  out.reserve(kept.size());
  for (const auto& c : kept) {
    const auto& triple = std::get<Triple>(c.payload);
    const auto& hop = hop_of.at(triple.key());
    out.push_back(path.extended(Hop{triple.relation, hop.direction, hop.next, *c.combined}));
  }
  return out;
}

// Unparseable replies count as "not sufficient".
inline bool check_sufficiency(const ReasoningPath& path, const Question& q, const Services& s,
                              Diagnostics* diag = nullptr) {
  auto reply = ask(s.llm, s.prompts, prompt_names::kSufficiency,
                   {{"question", q.text}, {"path", path.verbalize()}}, 8);
  try {
    return parse_yes_no(reply);
  } catch (const Error&) {
    warn(diag, "unparseable sufficiency reply for '" + path.verbalize() + "'");
    return false;
  }
}

struct TraceNode {
  std::size_t depth = 0;
  std::string text;  // verbalized last hop, or the origin
  double relation_score = 1.0;
  double path_score = 1.0;
  std::string note;
};

struct SearchResult {
  std::vector<ReasoningPath> emitted;  // maximal paths reached by the search
  std::optional<ReasoningPath> sufficient;
  std::size_t expand_calls = 0;
  bool budget_exhausted = false;
  std::vector<TraceNode> trace;  // DFS visiting order
};

inline SearchResult search_paths(const EntityRef& origin, const Question& q,
                                 const ChainConfig& cfg, const Services& s,
                                 Diagnostics* diag = nullptr) {
  cfg.search.validate();
  SearchResult result;
  bool stopped = false;

  auto record = [&](const ReasoningPath& p, std::string note) {
    TraceNode node;
    node.depth = p.depth();
    if (p.hops.empty()) {
      node.text = origin.display() + " (" + origin.id + ")";
    } else {
      const auto& h = p.hops.back();
      node.text = (h.direction == HopDirection::kHead ? "--" + h.relation.display() + "--> "
                                                      : "<--" + h.relation.display() + "-- ") +
                  object_label(h.next);
      node.relation_score = h.relation_score;
    }
    node.path_score = path_score(p);
    node.note = std::move(note);
    result.trace.push_back(std::move(node));
  };

  auto finish = [&](const ReasoningPath& p, const char* note) {
    if (cfg.search.sufficiency_mode == SufficiencyMode::kLeaf && check_sufficiency(p, q, s, diag)) {
      result.sufficient = p;
      stopped = true;
      note = "sufficient";
    }
    record(p, note);
    result.emitted.push_back(p);
  };

  std::function<void(const ReasoningPath&)> visit = [&](const ReasoningPath& p) {
    if (stopped) return;
    const bool rooted = p.depth() == 0;
    if (!rooted && cfg.search.sufficiency_mode == SufficiencyMode::kExpansion &&
        check_sufficiency(p, q, s, diag)) {
      record(p, "sufficient");
      result.sufficient = p;
      result.emitted.push_back(p);
      stopped = true;
      return;
    }
    if (p.depth() >= cfg.search.d_max || !is_entity(p.tip())) {
      finish(p, "leaf");
      return;
    }
    if (result.expand_calls >= cfg.search.expand_budget) {
      result.budget_exhausted = true;
      if (!rooted) finish(p, "budget");
      return;
    }
    ++result.expand_calls;
    auto children = expand(p, q, cfg, s, diag);
    if (children.empty()) {
      if (rooted) {
        record(p, "dead end");
      } else {
        finish(p, "dead end");
      }
      return;
    }
    record(p, "expanded");
    for (const auto& child : children) {
      visit(child);
      if (stopped) return;
    }
  };

  visit(ReasoningPath{origin, {}});
  return result;
}

// Best `k` paths by score; ties by verbalization for determinism.
inline std::vector<ReasoningPath> best_paths(std::vector<ReasoningPath> paths, std::size_t k) {
  std::stable_sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
    double sa = path_score(a), sb = path_score(b);
    if (sa != sb) return sa > sb;
    return a.verbalize() < b.verbalize();
  });
  if (paths.size() > k) paths.resize(k);
  return paths;
}

// The only knowledge handed to the answer generator.
inline std::string render_path_context(const std::vector<ReasoningPath>& paths) {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    lines.push_back("Path " + std::to_string(i + 1) + ":");
    for (const auto& t : paths[i].triples()) lines.push_back(format_triple(t));
  }
  return text::join(lines, "\n");
}

inline Answer run_chain_branch(const Question& q, const ChainConfig& cfg, const Services& s,
                               SearchResult* search_out = nullptr) {
  Answer answer;
  answer.question_id = q.id;
  answer.track = QuestionType::kChained;
  Diagnostics diag;

  EntityRef origin;
  try {
    origin = extract_central_entity(q, s, cfg.link_floor);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kLinkFailure && e.code() != ErrorCode::kInvalidArgument) throw;
    diag.warn(e.what());
    answer.flags.insert(flags::kNoCentralEntity);
    answer.flags.insert(flags::kInsufficient);
    answer.warnings = std::move(diag.warnings);
    return answer;
  }

  auto result = search_paths(origin, q, cfg, s, &diag);
  std::vector<ReasoningPath> chosen;
  if (result.sufficient) {
    chosen.push_back(*result.sufficient);
  } else {
    answer.flags.insert(flags::kInsufficient);
    chosen = best_paths(result.emitted, cfg.search.top_k_paths);
  }
  if (result.budget_exhausted) answer.flags.insert(flags::kBudgetExhausted);

  if (!chosen.empty()) {
    answer.text = std::string(text::trim(ask(
        s.llm, s.prompts, prompt_names::kGenerateAnswer,
        {{"question", q.text}, {"paths", render_path_context(chosen)}})));
  }
  answer.supporting_paths = std::move(chosen);
  answer.warnings = std::move(diag.warnings);
  if (search_out != nullptr) *search_out = std::move(result);
  return answer;
}

}  // namespace dualtrack
