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

#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dualtrack/error.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

// Answer flags.
namespace flags {
inline constexpr const char* kClassifierFallback = "classifier_fallback";
inline constexpr const char* kUnverified = "unverified";
inline constexpr const char* kInsufficient = "insufficient";
inline constexpr const char* kNoCentralEntity = "no_central_entity";
inline constexpr const char* kBudgetExhausted = "budget_exhausted";
inline constexpr const char* kTransportError = "transport_error";
inline constexpr const char* kProviderError = "provider_error";
inline constexpr const char* kFailed = "failed";
}  // namespace flags

struct AtomicFact {
  std::string text;
  std::string subject_surface;  // substring of text; may be empty if unknown
  int origin_index = 0;
};

enum class VerificationStatus { kVerified, kRevised, kUnverifiable };

inline std::string_view to_string(VerificationStatus s) {
  switch (s) {
    case VerificationStatus::kVerified: return "verified";
    case VerificationStatus::kRevised: return "revised";
    case VerificationStatus::kUnverifiable: return "unverifiable";
  }
  return "unknown";
}

struct VerificationResult {
  AtomicFact fact;
  VerificationStatus status = VerificationStatus::kUnverifiable;
  std::vector<Triple> best_triples;
  std::string revised_text;  // set iff status == kRevised
  std::string linked_entity;
};

enum class HopDirection { kHead, kTail };

// One step of a reasoning path. Head hops follow subject -> object; tail hops
// follow an incoming edge backwards, so `next` is that edge's subject.
struct Hop {
  RelationRef relation;
  HopDirection direction = HopDirection::kHead;
  ObjectValue next;
  double relation_score = 0.0;
};

struct ReasoningPath {
  EntityRef origin;
  std::vector<Hop> hops;

  std::size_t depth() const { return hops.size(); }

  ObjectValue tip() const {
    if (hops.empty()) return origin;
    return hops.back().next;
  }

  bool visits(const std::string& entity_id) const {
    if (origin.id == entity_id) return true;
    for (const auto& h : hops) {
      if (is_entity(h.next) && object_id(h.next) == entity_id) return true;
    }
    return false;
  }

  ReasoningPath extended(Hop hop) const {
    ReasoningPath p = *this;
    p.hops.push_back(std::move(hop));
    return p;
  }

  // The KG triples behind each hop, in their stored orientation.
  std::vector<Triple> triples() const {
    std::vector<Triple> out;
    ObjectValue prev = origin;
    for (const auto& h : hops) {
      const auto& from = std::get<EntityRef>(prev);
      if (h.direction == HopDirection::kHead) {
        out.push_back(Triple{from, h.relation, h.next});
      } else {
        out.push_back(Triple{std::get<EntityRef>(h.next), h.relation, from});
      }
      prev = h.next;
    }
    return out;
  }

  // "A --r--> B <--s-- C"; inverse hops point backwards.
  std::string verbalize() const {
    std::string s = origin.display();
    for (const auto& h : hops) {
      if (h.direction == HopDirection::kHead) {
        s += " --" + h.relation.display() + "--> ";
      } else {
        s += " <--" + h.relation.display() + "-- ";
      }
      s += object_label(h.next);
    }
    return s;
  }
};

// Product of hop scores; the empty path scores 1.
inline double path_score(const ReasoningPath& p) {
  double score = 1.0;
  for (const auto& h : p.hops) score *= h.relation_score;
  return score;
}

struct Answer {
  std::string question_id;
  std::string text;
  QuestionType track = QuestionType::kChained;
  std::string classifier_raw;
  std::string draft;                                // parallel track
  std::vector<VerificationResult> verifications;    // parallel track
  std::vector<ReasoningPath> supporting_paths;      // chained track
  std::set<std::string> flags;
  std::vector<std::string> warnings;

  bool has_flag(const std::string& f) const { return flags.contains(f); }
};

inline nlohmann::json to_json(const ObjectValue& v) {
  if (const auto* e = std::get_if<EntityRef>(&v)) {
    return {{"id", e->id}, {"label", e->label}};
  }
  const auto& l = std::get<Literal>(v);
  nlohmann::json j{{"literal", l.value}};
  if (!l.datatype.empty()) j["datatype"] = l.datatype;
  return j;
}

inline nlohmann::json to_json(const Triple& t) {
  return {{"subject", to_json(ObjectValue{t.subject})},
          {"relation", {{"id", t.relation.id}, {"label", t.relation.label}}},
          {"object", to_json(t.object)}};
}

inline nlohmann::json to_json(const VerificationResult& r) {
  nlohmann::json triples = nlohmann::json::array();
  for (const auto& t : r.best_triples) triples.push_back(to_json(t));
  nlohmann::json j{{"fact", r.fact.text},
                   {"subject", r.fact.subject_surface},
                   {"origin_index", r.fact.origin_index},
                   {"status", to_string(r.status)},
                   {"linked_entity", r.linked_entity},
                   {"best_triples", triples}};
  if (r.status == VerificationStatus::kRevised) j["revised_text"] = r.revised_text;
  return j;
}

inline nlohmann::json to_json(const ReasoningPath& p) {
  nlohmann::json hops = nlohmann::json::array();
  for (const auto& h : p.hops) {
    hops.push_back({{"relation", {{"id", h.relation.id}, {"label", h.relation.label}}},
                    {"direction", h.direction == HopDirection::kHead ? "head" : "tail"},
                    {"next", to_json(h.next)},
                    {"relation_score", h.relation_score}});
  }
  return {{"origin", to_json(ObjectValue{p.origin})},
          {"hops", hops},
          {"score", path_score(p)},
          {"text", p.verbalize()}};
}

inline nlohmann::json to_json(const Answer& a) {
  nlohmann::json j{{"question_id", a.question_id},
                   {"text", a.text},
                   {"track", to_string(a.track)},
                   {"classifier_raw", a.classifier_raw},
                   {"flags", a.flags},
                   {"warnings", a.warnings}};
  if (a.track == QuestionType::kParallel) {
    j["draft"] = a.draft;
    nlohmann::json results = nlohmann::json::array();
    for (const auto& r : a.verifications) results.push_back(to_json(r));
    j["verifications"] = results;
  } else {
    nlohmann::json paths = nlohmann::json::array();
    for (const auto& p : a.supporting_paths) paths.push_back(to_json(p));
    j["supporting_paths"] = paths;
  }
  return j;
}

}  // namespace dualtrack
