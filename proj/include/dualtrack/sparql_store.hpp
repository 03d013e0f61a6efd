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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dualtrack/error.hpp"
#include "dualtrack/http.hpp"
#include "dualtrack/kg_store.hpp"
#include "dualtrack/text.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

// Query-string keyed response cache. One file per query, named by the FNV-1a
// hash of the query; the query text is stored alongside the body and checked
// on read so a hash collision is a miss, not a wrong answer.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::optional<std::string> load(const std::string& query) const {
    std::ifstream in(path_for(query));
    if (!in) return std::nullopt;
    auto doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (!doc.is_object() || !doc.contains("query") || !doc.contains("body")) {
      return std::nullopt;
    }
    if (doc["query"].get<std::string>() != query) return std::nullopt;
    return doc["body"].get<std::string>();
  }

  // Write-then-rename so concurrent readers never see a partial file.
  void store(const std::string& query, const std::string& body) const {
    auto final_path = path_for(query);
    auto tmp = final_path;
    tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) +
           "." + std::to_string(counter_.fetch_add(1));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw Error(ErrorCode::kIo, "cannot write cache file " + tmp.string());
      }
      out << nlohmann::json{{"query", query}, {"body", body}}.dump();
    }
    std::filesystem::rename(tmp, final_path);
  }

  std::filesystem::path path_for(const std::string& query) const {
    return dir_ / (text::hex64(text::fnv1a64(query)) + ".json");
  }

 private:
  std::filesystem::path dir_;
  mutable std::atomic<unsigned> counter_{0};
};

struct SparqlOptions {
  std::optional<std::filesystem::path> cache_dir;
  RetryPolicy retry;
  Sleeper sleep = real_sleeper();
  std::string user_agent = "dualtrack/1.0 (knowledge-graph QA research tool)";
};

// Live client for a SPARQL endpoint speaking the standard JSON results format.
class SparqlStore final : public KgStore {
 public:
  SparqlStore(std::string endpoint, std::shared_ptr<HttpTransport> transport,
              SparqlOptions options = {})
      : endpoint_(std::move(endpoint)),
        transport_(std::move(transport)),
        options_(std::move(options)) {
    if (options_.cache_dir) cache_.emplace(*options_.cache_dir);
  }

  std::optional<EntityRef> resolve_entity_id(std::string_view label) const override {
    auto rows = select(sparql::entity_id_query(sanitize_label(label)));
    for (const auto& row : rows) {
      auto id = entity_id_from_uri(binding_value(row, "item"));
      if (id) return EntityRef{*id, std::string(label)};
    }
    return std::nullopt;
  }

  std::optional<std::string> get_label(const RelationRef& relation) const override {
    if (relation.id.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty relation id");
    }
    {
      std::lock_guard lock(labels_mu_);
      auto it = label_memo_.find(relation.id);
      if (it != label_memo_.end()) return it->second;
    }
    std::optional<std::string> label;
    auto rows = select(sparql::label_query(relation.id));
    if (!rows.empty()) label = binding_value(rows.front(), "propertyLabel");
    std::lock_guard lock(labels_mu_);
    label_memo_.emplace(relation.id, label);
    return label;
  }

  std::vector<Triple> head_relations(const EntityRef& entity) const override {
    require_entity(entity);
    auto rows = select(sparql::head_relations_query(entity.id));
    std::vector<Triple> out;
    for (const auto& row : rows) {
      if (out.size() == kRelationLimit) break;
      auto relation = relation_from(row);
      if (!relation) continue;
      Triple t;
      t.subject = entity;
      t.relation = std::move(*relation);
      t.object = object_from(row, "o");
      out.push_back(std::move(t));
    }
    return out;
  }

  std::vector<Triple> tail_relations(const EntityRef& entity) const override {
    require_entity(entity);
    auto rows = select(sparql::tail_relations_query(entity.id));
    std::vector<Triple> out;
    for (const auto& row : rows) {
      if (out.size() == kRelationLimit) break;
      auto relation = relation_from(row);
      if (!relation) continue;
      auto subject = object_from(row, "s");
      auto* s = std::get_if<EntityRef>(&subject);
      if (s == nullptr) continue;  // literals cannot be subjects
      Triple t;
      t.subject = std::move(*s);
      t.relation = std::move(*relation);
      t.object = entity;
      out.push_back(std::move(t));
    }
    return out;
  }

  std::size_t network_requests() const { return requests_.load(); }

 private:
  static void require_entity(const EntityRef& e) {
    if (!is_entity_id(e.id)) {
      throw Error(ErrorCode::kInvalidArgument, "not an entity id: '" + e.id + "'");
    }
  }

  static std::optional<std::string> entity_id_from_uri(const std::string& uri) {
    if (uri.rfind(sparql::kEntityPrefix, 0) != 0) return std::nullopt;
    auto id = uri.substr(sparql::kEntityPrefix.size());
    if (!is_entity_id(id)) return std::nullopt;
    return id;
  }

  static std::string binding_value(const nlohmann::json& row, const char* name) {
    if (!row.contains(name)) return {};
    const auto& cell = row[name];
    if (!cell.is_object() || !cell.contains("value") || !cell["value"].is_string()) {
      throw Error(ErrorCode::kMalformedResponse,
                  std::string("binding '") + name + "' has no string value");
    }
    return cell["value"].get<std::string>();
  }

  std::optional<RelationRef> relation_from(const nlohmann::json& row) const {
    auto uri = binding_value(row, "relation");
    if (uri.rfind(sparql::kDirectPropertyPrefix, 0) != 0) return std::nullopt;
    RelationRef r{uri.substr(sparql::kDirectPropertyPrefix.size()),
                  binding_value(row, "relationLabel")};
    // The label service only echoes the local name for direct-property IRIs.
    if (r.label.empty() || r.label == r.id || r.label == uri) {
      r.label = get_label(r).value_or("");
    }
    return r;
  }

  static ObjectValue object_from(const nlohmann::json& row, const std::string& var) {
    const std::string label_var = var + "Label";
    auto value = binding_value(row, var.c_str());
    if (value.empty()) {
      throw Error(ErrorCode::kMalformedResponse, "missing binding '" + var + "'");
    }
    const auto& cell = row[var];
    std::string type = cell.value("type", "");
    if (type == "uri") {
      if (auto id = entity_id_from_uri(value)) {
        return EntityRef{*id, binding_value(row, label_var.c_str())};
      }
      return Literal{value, "uri"};
    }
    return Literal{value, cell.value("datatype", "")};
  }

  std::vector<nlohmann::json> select(const std::string& query) const {
    std::string body;
    if (cache_) {
      if (auto hit = cache_->load(query)) body = std::move(*hit);
    }
    if (body.empty()) {
      body = fetch(query);
      if (cache_) cache_->store(query, body);
    }
    auto doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("results") ||
        !doc["results"].is_object() || !doc["results"].contains("bindings") ||
        !doc["results"]["bindings"].is_array()) {
      throw Error(ErrorCode::kMalformedResponse,
                  "response is not a SPARQL JSON result set");
    }
    std::vector<nlohmann::json> rows;
    for (const auto& row : doc["results"]["bindings"]) {
      if (!row.is_object()) {
        throw Error(ErrorCode::kMalformedResponse, "binding row is not an object");
      }
      rows.push_back(row);
    }
    return rows;
  }

  std::string fetch(const std::string& query) const {
    HttpFields params{{"query", query}};
    HttpFields headers{{"Accept", "application/sparql-results+json"},
                       {"User-Agent", options_.user_agent}};
    auto resp = send_with_retry(
        [&] {
          requests_.fetch_add(1);
          return transport_->get(endpoint_, params, headers);
        },
        options_.retry, options_.sleep, "SPARQL " + endpoint_);
    return resp.body;
  }

  std::string endpoint_;
  std::shared_ptr<HttpTransport> transport_;
  SparqlOptions options_;
  std::optional<ResponseCache> cache_;
  mutable std::atomic<std::size_t> requests_{0};
  mutable std::mutex labels_mu_;
  mutable std::unordered_map<std::string, std::optional<std::string>> label_memo_;
};

}  // namespace dualtrack
