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

#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dualtrack/error.hpp"
#include "dualtrack/kg_store.hpp"
#include "dualtrack/text.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

// Deterministic triple store backing all offline runs and tests. Populate it
// with add() or the fixture loaders, then share it read-only.
//
// Fixture format, one triple per line, '#' starts a comment line:
//   subject_id|subject_label|relation_id|relation_label|object|object_label
// `object` is an entity id when it looks like one, otherwise a literal.
class InMemoryStore final : public KgStore {
 public:
  InMemoryStore() = default;

  static InMemoryStore from_stream(std::istream& in) {
    InMemoryStore store;
    store.load(in);
    return store;
  }

  static InMemoryStore from_string(const std::string& fixture) {
    std::istringstream in(fixture);
    return from_stream(in);
  }

  static InMemoryStore from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
      throw Error(ErrorCode::kIo, "cannot open fixture file " + path.string());
    }
    return from_stream(in);
  }

  static Triple parse_fixture_line(std::string_view line, std::size_t line_no = 0) {
    auto fields = text::split(line, '|');
    if (fields.size() != 6) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fixture line " + std::to_string(line_no) + ": expected 6 '|'-separated fields, got " +
                      std::to_string(fields.size()));
    }
    for (auto& f : fields) f = std::string(text::trim(f));
    if (!is_entity_id(fields[0])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fixture line " + std::to_string(line_no) + ": bad subject id '" + fields[0] + "'");
    }
    Triple t;
    t.subject = EntityRef{fields[0], fields[1]};
    t.relation = RelationRef{fields[2], fields[3]};
    if (is_entity_id(fields[4])) {
      t.object = EntityRef{fields[4], fields[5]};
    } else {
      t.object = Literal{fields[4], ""};
    }
    try {
      validate(t);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fixture line " + std::to_string(line_no) + ": " + e.what());
    }
    return t;
  }

  void load(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto trimmed = text::trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      add(parse_fixture_line(trimmed, line_no));
    }
  }

  void add(Triple t) {
    validate(t);
    if (!seen_.insert(t.key()).second) return;
    note_entity(t.subject);
    if (const auto* o = std::get_if<EntityRef>(&t.object)) note_entity(*o);
    if (!t.relation.label.empty()) {
      relation_labels_.try_emplace(t.relation.id, t.relation.label);
    }
    std::size_t index = triples_.size();
    by_subject_[t.subject.id].push_back(index);
    if (const auto* o = std::get_if<EntityRef>(&t.object)) {
      by_object_[o->id].push_back(index);
    }
    triples_.push_back(std::move(t));
  }

  std::optional<EntityRef> resolve_entity_id(std::string_view label) const override {
    sanitize_label(label);  // same input contract as the live client
    auto it = by_label_.find(std::string(label));
    if (it == by_label_.end()) return std::nullopt;
    return EntityRef{it->second, std::string(label)};
  }

  std::optional<std::string> get_label(const RelationRef& relation) const override {
    if (relation.id.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty relation id");
    }
    auto it = relation_labels_.find(relation.id);
    if (it == relation_labels_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<Triple> head_relations(const EntityRef& entity) const override {
    return collect(by_subject_, entity.id);
  }

  std::vector<Triple> tail_relations(const EntityRef& entity) const override {
    return collect(by_object_, entity.id);
  }

  std::vector<EntityRef> link_candidates(std::string_view) const override {
    std::vector<EntityRef> out;
    for (const auto& [id, label] : entity_labels_) {
      if (!label.empty()) out.push_back(EntityRef{id, label});
    }
    return out;
  }

  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }

  std::optional<std::string> entity_label(const std::string& id) const {
    auto it = entity_labels_.find(id);
    if (it == entity_labels_.end() || it->second.empty()) return std::nullopt;
    return it->second;
  }

 private:
  void note_entity(const EntityRef& e) {
    auto [it, inserted] = entity_labels_.try_emplace(e.id, e.label);
    if (!inserted && it->second.empty()) it->second = e.label;
    // First entity seen with a label wins, like LIMIT 1 over a stable order.
    if (!e.label.empty()) by_label_.try_emplace(e.label, e.id);
  }

  std::vector<Triple> collect(
      const std::unordered_map<std::string, std::vector<std::size_t>>& index,
      const std::string& id) const {
    std::vector<Triple> out;
    auto it = index.find(id);
    if (it == index.end()) return out;
    for (std::size_t i : it->second) {
      if (out.size() == kRelationLimit) break;
      out.push_back(resolved(triples_[i]));
    }
    return out;
  }

  // Fill labels that were only given on another line.
  Triple resolved(Triple t) const {
    if (t.subject.label.empty()) {
      if (auto l = entity_label(t.subject.id)) t.subject.label = *l;
    }
    if (auto* o = std::get_if<EntityRef>(&t.object); o && o->label.empty()) {
      if (auto l = entity_label(o->id)) o->label = *l;
    }
    if (t.relation.label.empty()) {
      auto it = relation_labels_.find(t.relation.id);
      if (it != relation_labels_.end()) t.relation.label = it->second;
    }
    return t;
  }

  std::vector<Triple> triples_;
  std::unordered_set<std::string> seen_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_object_;
  std::map<std::string, std::string> entity_labels_;
  std::unordered_map<std::string, std::string> by_label_;
  std::unordered_map<std::string, std::string> relation_labels_;
};

}  // namespace dualtrack
