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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualtrack/error.hpp"
#include "dualtrack/text.hpp"

namespace dualtrack {

// All engine settings. Stored as one flat JSON object whose keys are the
// member names; any key can be overridden by an environment variable named
// DTKG_<KEY IN UPPER CASE> (lists are comma separated).
struct EngineConfig {
  // knowledge graph
  std::string kg_store = "sparql";  // sparql | fixture
  std::string sparql_url = "https://query.wikidata.org/sparql";
  std::string kg_fixture;
  std::string cache_dir;

  // LLM
  std::string llm_provider = "stub";  // stub | http
  std::string llm_url;
  long llm_max_tokens = 512;
  std::string stub_mode = "scripted";  // scripted | strict | echo
  std::string stub_default;
  std::string prompts_dir;

  // scoring
  std::string embedding_provider = "hash";  // hash | http
  std::string embedding_url;
  long embedding_dimension = 256;
  std::string rerank_provider = "overlap";  // constant | overlap | http
  std::string rerank_url;
  double rerank_constant = 0.5;
  double alpha = 0.7;
  long top_n = 50;

  // parallel track
  long verify_top_k = 3;
  double link_floor = 0.8;

  // chained track
  long d_max = 3;
  long w_max = 5;
  double theta_search = 0.3;
  long llm_select_trigger = 8;
  long top_k_paths = 3;
  long expand_budget = 500;
  std::string sufficiency_mode = "expansion";  // expansion | leaf

  // denoising
  double theta_necessity = 0.5;
  std::vector<std::string> k_invalid{"id", "source", "version", "metadata"};

  // routing and evaluation
  std::string default_track = "chained";
  double tau = 0.5;
  long parallelism = 1;

  // transport
  long retry_base_ms = 500;
  long timeout_s = 30;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

// Calls f(name, member) for every setting, in declaration order.
template <typename Config, typename F>
void visit_fields(Config& c, F&& f) {
  f("kg_store", c.kg_store);
  f("sparql_url", c.sparql_url);
  f("kg_fixture", c.kg_fixture);
  f("cache_dir", c.cache_dir);
  f("llm_provider", c.llm_provider);
  f("llm_url", c.llm_url);
  f("llm_max_tokens", c.llm_max_tokens);
  f("stub_mode", c.stub_mode);
  f("stub_default", c.stub_default);
  f("prompts_dir", c.prompts_dir);
  f("embedding_provider", c.embedding_provider);
  f("embedding_url", c.embedding_url);
  f("embedding_dimension", c.embedding_dimension);
  f("rerank_provider", c.rerank_provider);
  f("rerank_url", c.rerank_url);
  f("rerank_constant", c.rerank_constant);
  f("alpha", c.alpha);
  f("top_n", c.top_n);
  f("verify_top_k", c.verify_top_k);
  f("link_floor", c.link_floor);
  f("d_max", c.d_max);
  f("w_max", c.w_max);
  f("theta_search", c.theta_search);
  f("llm_select_trigger", c.llm_select_trigger);
  f("top_k_paths", c.top_k_paths);
  f("expand_budget", c.expand_budget);
  f("sufficiency_mode", c.sufficiency_mode);
  f("theta_necessity", c.theta_necessity);
  f("k_invalid", c.k_invalid);
  f("default_track", c.default_track);
  f("tau", c.tau);
  f("parallelism", c.parallelism);
  f("retry_base_ms", c.retry_base_ms);
  f("timeout_s", c.timeout_s);
}

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, "config: " + what);
}

inline void require_one_of(const std::string& key, const std::string& value,
                           std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  throw Error(ErrorCode::kInvalidArgument, "config: " + key + " has unsupported value '" + value + "'");
}

inline bool unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace detail

inline void validate(const EngineConfig& c) {
  using detail::require;
  using detail::require_one_of;
  using detail::unit;
  require_one_of("kg_store", c.kg_store, {"sparql", "fixture"});
  require_one_of("llm_provider", c.llm_provider, {"stub", "http"});
  require_one_of("stub_mode", c.stub_mode, {"scripted", "strict", "echo"});
  require_one_of("embedding_provider", c.embedding_provider, {"hash", "http"});
  require_one_of("rerank_provider", c.rerank_provider, {"constant", "overlap", "http"});
  require_one_of("sufficiency_mode", c.sufficiency_mode, {"expansion", "leaf"});
  require_one_of("default_track", c.default_track, {"chained", "parallel"});
  require(c.kg_store != "fixture" || !c.kg_fixture.empty(), "kg_store=fixture needs kg_fixture");
  require(c.kg_store != "sparql" || !c.sparql_url.empty(), "kg_store=sparql needs sparql_url");
  require(c.llm_provider != "http" || !c.llm_url.empty(), "llm_provider=http needs llm_url");
  require(c.embedding_provider != "http" || !c.embedding_url.empty(),
          "embedding_provider=http needs embedding_url");
  require(c.rerank_provider != "http" || !c.rerank_url.empty(),
          "rerank_provider=http needs rerank_url");
  require(unit(c.alpha), "alpha must be in [0,1]");
  require(unit(c.rerank_constant), "rerank_constant must be in [0,1]");
  require(unit(c.theta_search), "theta_search must be in [0,1]");
  require(unit(c.theta_necessity), "theta_necessity must be in [0,1]");
  require(unit(c.tau), "tau must be in [0,1]");
  require(unit(c.link_floor), "link_floor must be in [0,1]");
  require(c.top_n >= 1, "top_n must be >= 1");
  require(c.verify_top_k >= 1, "verify_top_k must be >= 1");
  require(c.d_max >= 1, "d_max must be >= 1");
  require(c.w_max >= 1, "w_max must be >= 1");
  require(c.llm_select_trigger >= 0, "llm_select_trigger must be >= 0");
  require(c.top_k_paths >= 1, "top_k_paths must be >= 1");
  require(c.expand_budget >= 1, "expand_budget must be >= 1");
  require(c.embedding_dimension >= 1, "embedding_dimension must be >= 1");
  require(c.llm_max_tokens >= 1, "llm_max_tokens must be >= 1");
  require(c.parallelism >= 1, "parallelism must be >= 1");
  require(c.retry_base_ms >= 0, "retry_base_ms must be >= 0");
  require(c.timeout_s >= 1, "timeout_s must be >= 1");
  for (const auto& k : c.k_invalid) require(!k.empty(), "k_invalid keywords must be non-empty");
}

inline nlohmann::json to_json(const EngineConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  visit_fields(c, [&](const char* name, const auto& value) { j[name] = value; });
  return j;
}

// Keys absent from `j` keep their defaults; unknown keys are rejected.
inline EngineConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  EngineConfig c;
  std::set<std::string> known;
  visit_fields(c, [&](const char* name, auto& member) {
    known.insert(name);
    if (!j.contains(name)) return;
    try {
      member = j.at(name).get<std::decay_t<decltype(member)>>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kInvalidArgument, std::string("config: bad value type for ") + name);
    }
  });
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument, "config: unknown key '" + key + "'");
    }
  }
  return c;
}

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

inline void apply_env_overrides(EngineConfig& c, const EnvLookup& env) {
  visit_fields(c, [&](const char* name, auto& member) {
    std::string var = "DTKG_";
    for (const char* p = name; *p != '\0'; ++p) {
      var.push_back(*p >= 'a' && *p <= 'z' ? static_cast<char>(*p - 'a' + 'A') : *p);
    }
    auto value = env(var);
    if (!value) return;
    using T = std::decay_t<decltype(member)>;
    try {
      if constexpr (std::is_same_v<T, std::string>) {
        member = *value;
      } else if constexpr (std::is_same_v<T, double>) {
        std::size_t used = 0;
        member = std::stod(*value, &used);
        if (used != value->size()) throw std::invalid_argument(*value);
      } else if constexpr (std::is_same_v<T, long>) {
        std::size_t used = 0;
        member = std::stol(*value, &used);
        if (used != value->size()) throw std::invalid_argument(*value);
      } else {
        T list;
        for (const auto& part : text::split(*value, ',')) {
          auto trimmed = text::trim(part);
          if (!trimmed.empty()) list.emplace_back(trimmed);
        }
        member = std::move(list);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidArgument, "environment variable " + var + " has bad value '" +
                                                   *value + "'");
    }
  });
}

inline EngineConfig load_config(const std::optional<std::filesystem::path>& path,
                                const EnvLookup& env = process_env()) {
  EngineConfig c;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path->string());
    auto doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
      throw Error(ErrorCode::kInvalidArgument, "config file is not valid JSON: " + path->string());
    }
    c = config_from_json(doc);
  }
  apply_env_overrides(c, env);
  validate(c);
  return c;
}

}  // namespace dualtrack
