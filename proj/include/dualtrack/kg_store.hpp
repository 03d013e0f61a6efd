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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualtrack/error.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

// Per-call cap on head/tail retrieval, matching the query templates.
inline constexpr std::size_t kRelationLimit = 100;

// Read-only knowledge graph access. Implementations must be safe to share
// between threads.
class KgStore {
 public:
  virtual ~KgStore() = default;

  // First item whose English label equals `label` exactly.
  virtual std::optional<EntityRef> resolve_entity_id(std::string_view label) const = 0;

  // English label of a property.
  virtual std::optional<std::string> get_label(const RelationRef& relation) const = 0;

  // Triples with `entity` as subject, at most kRelationLimit.
  virtual std::vector<Triple> head_relations(const EntityRef& entity) const = 0;

  // Triples with `entity` as object, at most kRelationLimit.
  virtual std::vector<Triple> tail_relations(const EntityRef& entity) const = 0;

  // Labelled entities eligible for fuzzy linking when exact lookup fails.
  // Stores that cannot enumerate labels return nothing.
  virtual std::vector<EntityRef> link_candidates(std::string_view /*surface*/) const {
    return {};
  }

  RelationSet relations(const EntityRef& entity) const {
    return RelationSet{head_relations(entity), tail_relations(entity)};
  }
};

// Escapes a label for embedding inside a double-quoted SPARQL literal.
// Backslash and double quote are escaped; line breaks are rejected.
inline std::string sanitize_label(std::string_view label) {
  if (label.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty label");
  }
  std::string out;
  out.reserve(label.size() + 4);
  for (char c : label) {
    if (c == '\n' || c == '\r') {
      throw Error(ErrorCode::kInvalidArgument, "label contains a line break");
    }
    if (c == '\\' || c == '"') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

namespace sparql {

inline constexpr std::string_view kEntityPrefix = "http://www.wikidata.org/entity/";
inline constexpr std::string_view kDirectPropertyPrefix =
    "http://www.wikidata.org/prop/direct/";

inline std::string entity_id_query(std::string_view safe_name) {
  std::string q = "SELECT ?item WHERE {\n    ?item rdfs:label \"";
  q += safe_name;
  q +=
      "\"@en.\n"
      "    FILTER(STRSTARTS(STR(?item),\n"
      "    \"http://www.wikidata.org/entity/Q\"))\n"
      "} LIMIT 1";
  return q;
}

inline std::string label_query(std::string_view relation_id) {
  std::string q = "SELECT ?propertyLabel WHERE {\n  wd:";
  q += relation_id;
  q +=
      " rdfs:label ?propertyLabel.\n"
      "  FILTER(LANG(?propertyLabel) = \"en\")\n"
      "}\n"
      "LIMIT 1";
  return q;
}

inline std::string head_relations_query(std::string_view entity_id) {
  std::string q =
      "SELECT ?relation ?relationLabel ?o ?oLabel WHERE {\n"
      "    wd:";
  q += entity_id;
  q +=
      " ?relation ?o.\n"
      "    FILTER(STRSTARTS(STR(?relation),\n"
      "    \"http://www.wikidata.org/prop/direct/\"))\n"
      "    SERVICE wikibase:label \n"
      "    { bd:serviceParam wikibase:language \"en\". }\n"
      "} LIMIT 100";
  return q;
}

inline std::string tail_relations_query(std::string_view entity_id) {
  std::string q =
      "SELECT ?relation ?relationLabel ?s ?sLabel WHERE {\n"
      "    ?s ?relation wd:";
  q += entity_id;
  q +=
      ".\n"
      "    FILTER(STRSTARTS(STR(?relation), \n"
      "    \"http://www.wikidata.org/prop/direct/\"))\n"
      "    SERVICE wikibase:label \n"
      "    { bd:serviceParam wikibase:language \"en\". }\n"
      "} LIMIT 100";
  return q;
}

}  // namespace sparql

}  // namespace dualtrack
