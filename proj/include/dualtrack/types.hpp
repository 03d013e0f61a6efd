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

#include <compare>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dualtrack/error.hpp"

namespace dualtrack {

// Item identifiers: "Q" followed by optional uppercase tag letters and at
// least one digit ("Q42", fixture ids like "QF1").
inline bool is_entity_id(std::string_view id) {
  if (id.size() < 2 || id.front() != 'Q') return false;
  std::size_t i = 1;
  while (i < id.size() && id[i] >= 'A' && id[i] <= 'Z') ++i;
  if (i == id.size()) return false;
  for (; i < id.size(); ++i) {
    if (id[i] < '0' || id[i] > '9') return false;
  }
  return true;
}

struct EntityRef {
  std::string id;
  std::string label;

  // Label if resolved, id otherwise.
  const std::string& display() const { return label.empty() ? id : label; }

  friend auto operator<=>(const EntityRef&, const EntityRef&) = default;
};

struct RelationRef {
  std::string id;
  std::string label;

  const std::string& display() const { return label.empty() ? id : label; }

  friend auto operator<=>(const RelationRef&, const RelationRef&) = default;
};

struct Literal {
  std::string value;
  std::string datatype;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using ObjectValue = std::variant<EntityRef, Literal>;

inline bool is_entity(const ObjectValue& v) {
  return std::holds_alternative<EntityRef>(v);
}

// Entity id, or the literal value for literals.
inline const std::string& object_id(const ObjectValue& v) {
  if (const auto* e = std::get_if<EntityRef>(&v)) return e->id;
  return std::get<Literal>(v).value;
}

inline const std::string& object_label(const ObjectValue& v) {
  if (const auto* e = std::get_if<EntityRef>(&v)) return e->display();
  return std::get<Literal>(v).value;
}

struct Triple {
  EntityRef subject;
  RelationRef relation;
  ObjectValue object;

  // Stable identity used for deduplication and deterministic tie-breaks.
  std::string key() const {
    std::string k = subject.id + "|" + relation.id + "|";
    k += is_entity(object) ? "E:" : "L:";
    k += object_id(object);
    return k;
  }

  // "<subject label> <relation label> <object label>"
  std::string verbalize() const {
    return subject.display() + " " + relation.display() + " " +
           object_label(object);
  }

  friend bool operator==(const Triple&, const Triple&) = default;
};

inline void validate(const Triple& t) {
  if (t.subject.id.empty() || t.relation.id.empty() || object_id(t.object).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "triple with empty position");
  }
}

// Head: the focal entity is the subject. Tail: it is the object.
struct RelationSet {
  std::vector<Triple> head;
  std::vector<Triple> tail;

  std::vector<Triple> all() const {
    std::vector<Triple> out = head;
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
  }
};

enum class QuestionType { kChained, kParallel };

inline std::string_view to_string(QuestionType t) {
  return t == QuestionType::kChained ? "chained" : "parallel";
}

inline QuestionType parse_question_type(std::string_view s) {
  if (s == "chained") return QuestionType::kChained;
  if (s == "parallel") return QuestionType::kParallel;
  throw Error(ErrorCode::kInvalidArgument,
              "question type must be 'chained' or 'parallel', got '" +
                  std::string(s) + "'");
}

struct Question {
  std::string id;
  std::string text;
  std::vector<std::string> gold_answers;
};

}  // namespace dualtrack
