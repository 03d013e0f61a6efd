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

// Shared fixtures for the unit and acceptance suites.

#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualtrack/dualtrack.hpp"

namespace dualtrack::testing {

inline std::filesystem::path source_dir() { return DUALTRACK_SOURCE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Owns one of each provider and hands out a Services view.
struct Rig {
  InMemoryStore kg;
  StubProvider llm;
  std::unique_ptr<EmbeddingProvider> embedder = std::make_unique<HashEmbedding>(256);
  std::unique_ptr<RerankProvider> reranker = std::make_unique<OverlapReranker>();
  PromptLibrary prompts = PromptLibrary::defaults();

  Rig(InMemoryStore store, std::vector<ScriptEntry> script, std::string default_reply = "",
      std::unique_ptr<RerankProvider> rerank = nullptr)
      : kg(std::move(store)),
        llm(std::move(script), StubProvider::Mode::kScripted, std::move(default_reply)) {
    if (rerank) reranker = std::move(rerank);
  }

  Services services() const { return Services{kg, llm, *embedder, *reranker, prompts}; }
};

// Every text maps to the same unit vector, so cosine is 1 everywhere.
class ConstantEmbedding final : public EmbeddingProvider {
 public:
  std::size_t dimension() const override { return 4; }
  std::vector<Embedding> embed(std::span<const std::string> texts) const override {
    return std::vector<Embedding>(texts.size(), Embedding{1.0, 0.0, 0.0, 0.0});
  }
};

// Scores a document by the first table key it contains; 0 otherwise.
class TableReranker final : public RerankProvider {
 public:
  explicit TableReranker(std::map<std::string, double> table) : table_(std::move(table)) {}
  std::vector<double> rerank(std::string_view, std::span<const std::string> docs) const override {
    std::vector<double> out;
    for (const auto& d : docs) {
      double v = 0.0;
      for (const auto& [token, score] : table_) {
        if (text::contains_folded(d, token)) {
          v = score;
          break;
        }
      }
      out.push_back(v);
    }
    return out;
  }

 private:
  std::map<std::string, double> table_;
};

// Records the largest batch handed to the reranker.
class RecordingReranker final : public RerankProvider {
 public:
  explicit RecordingReranker(double value) : value_(value) {}
  std::vector<double> rerank(std::string_view, std::span<const std::string> docs) const override {
    calls_.fetch_add(1);
    std::size_t seen = max_batch_.load();
    while (docs.size() > seen && !max_batch_.compare_exchange_weak(seen, docs.size())) {
    }
    return std::vector<double>(docs.size(), value_);
  }
  std::size_t calls() const { return calls_.load(); }
  std::size_t max_batch() const { return max_batch_.load(); }

 private:
  double value_;
  mutable std::atomic<std::size_t> calls_{0};
  mutable std::atomic<std::size_t> max_batch_{0};
};

// Provider that fails every call, as an unreachable backend would.
class FailingProvider final : public LlmProvider {
 public:
  CompletionResponse complete(const CompletionRequest&) const override {
    calls_.fetch_add(1);
    throw Error(ErrorCode::kProvider, "backend unavailable");
  }
  std::size_t calls() const { return calls_.load(); }

 private:
  mutable std::atomic<std::size_t> calls_{0};
};

// Transport that must never be used.
class ForbiddenTransport final : public HttpTransport {
 public:
  HttpResponse get(const std::string& url, const HttpFields&, const HttpFields&) override {
    uses.fetch_add(1);
    return {0, "", "forbidden GET " + url};
  }
  HttpResponse post(const std::string& url, const std::string&, const std::string&,
                    const HttpFields&) override {
    uses.fetch_add(1);
    return {0, "", "forbidden POST " + url};
  }
  std::atomic<int> uses{0};
};

// Scripted sequence of responses; repeats the last one when exhausted.
class SequenceTransport final : public HttpTransport {
 public:
  explicit SequenceTransport(std::vector<HttpResponse> responses) : responses_(std::move(responses)) {}
  HttpResponse get(const std::string&, const HttpFields& params, const HttpFields& headers) override {
    std::lock_guard lock(mu_);
    last_params = params;
    last_headers = headers;
    return next();
  }
  HttpResponse post(const std::string&, const std::string& body, const std::string&,
                    const HttpFields&) override {
    std::lock_guard lock(mu_);
    last_body = body;
    return next();
  }
  int calls() const { return calls_; }
  HttpFields last_params, last_headers;
  std::string last_body;

 private:
  HttpResponse next() {
    auto i = std::min<std::size_t>(static_cast<std::size_t>(calls_), responses_.size() - 1);
    ++calls_;
    return responses_[i];
  }
  std::vector<HttpResponse> responses_;
  int calls_ = 0;
  std::mutex mu_;
};

// Answers the four query shapes from an in-memory graph, in the standard
// JSON results format, without applying any LIMIT of its own beyond the one
// written in the query text.
class GraphEndpoint final : public HttpTransport {
 public:
  explicit GraphEndpoint(const InMemoryStore& store) : store_(store) {}

  HttpResponse get(const std::string&, const HttpFields& params, const HttpFields&) override {
    ++requests;
    std::string query;
    for (const auto& [k, v] : params) {
      if (k == "query") query = v;
    }
    return {200, answer(query).dump(), ""};
  }
  HttpResponse post(const std::string&, const std::string&, const std::string&,
                    const HttpFields&) override {
    return {405, "", "POST not supported"};
  }
  int requests = 0;

 private:
  static nlohmann::json uri(const std::string& v) { return {{"type", "uri"}, {"value", v}}; }
  static nlohmann::json lit(const std::string& v) {
    return {{"type", "literal"}, {"value", v}, {"xml:lang", "en"}};
  }
  static nlohmann::json object_binding(const ObjectValue& o) {
    if (const auto* e = std::get_if<EntityRef>(&o)) {
      return uri("http://www.wikidata.org/entity/" + e->id);
    }
    return {{"type", "literal"}, {"value", std::get<Literal>(o).value}};
  }

  nlohmann::json answer(const std::string& query) const {
    static const std::regex limit_re("LIMIT (\\d+)");
    static const std::regex label_re("rdfs:label \"((?:[^\"\\\\]|\\\\.)*)\"@en");
    static const std::regex head_re("wd:(\\S+) \\?relation \\?o\\.");
    static const std::regex tail_re("\\?s \\?relation wd:(\\S+)\\.");
    static const std::regex prop_re("wd:(\\S+) rdfs:label \\?propertyLabel");
    std::smatch m;
    std::size_t limit = 1000000;
    if (std::regex_search(query, m, limit_re)) limit = std::stoul(m[1]);
    nlohmann::json rows = nlohmann::json::array();
    auto push = [&](nlohmann::json row) {
      if (rows.size() < limit) rows.push_back(std::move(row));
    };
    if (std::regex_search(query, m, label_re)) {
      std::string label;
      std::string raw = m[1];
      for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '\\' && i + 1 < raw.size()) ++i;
        label.push_back(raw[i]);
      }
      if (auto e = store_.resolve_entity_id(label)) {
        push({{"item", uri("http://www.wikidata.org/entity/" + e->id)}});
      }
    } else if (std::regex_search(query, m, prop_re)) {
      if (auto l = store_.get_label(RelationRef{m[1], ""})) push({{"propertyLabel", lit(*l)}});
    } else if (std::regex_search(query, m, head_re)) {
      for (const auto& t : store_.triples()) {
        if (t.subject.id != m[1].str()) continue;
        push({{"relation", uri("http://www.wikidata.org/prop/direct/" + t.relation.id)},
              {"relationLabel", lit(t.relation.label)},
              {"o", object_binding(t.object)},
              {"oLabel", lit(object_label(t.object))}});
      }
    } else if (std::regex_search(query, m, tail_re)) {
      for (const auto& t : store_.triples()) {
        if (!is_entity(t.object) || object_id(t.object) != m[1].str()) continue;
        push({{"relation", uri("http://www.wikidata.org/prop/direct/" + t.relation.id)},
              {"relationLabel", lit(t.relation.label)},
              {"s", uri("http://www.wikidata.org/entity/" + t.subject.id)},
              {"sLabel", lit(t.subject.label)}});
      }
    }
    return {{"head", {{"vars", nlohmann::json::array()}}}, {"results", {{"bindings", rows}}}};
  }

  const InMemoryStore& store_;
};

inline ScriptEntry entry(std::string match, std::string response) {
  return ScriptEntry{std::move(match), std::move(response)};
}

// The chained-track fixture graph.
inline const char* kChainFixture =
    "# film, director, spouse, birthdate\n"
    "QF1|Inception|PF1|director|QF2|Christopher Nolan\n"
    "QF2|Christopher Nolan|PF2|spouse|QF3|Emma Thomas\n"
    "QF3|Emma Thomas|PF3|birthdate|1975-05-26|1975-05-26\n"
    "QF1|Inception|PF4|Wikidata ID|Q1375011|Q1375011\n"
    "QF1|Inception|PF5|genre|QF4|science fiction film\n"
    "QF2|Christopher Nolan|PF6|country of citizenship|QF5|United Kingdom\n";

inline const char* kChainQuestion = "When was the wife of the Inception director born?";

inline std::vector<ScriptEntry> chain_script() {
  return {
      entry("Central entity:", "Inception"),
      entry("Sufficient (yes/no):", "no"),
      entry("--birthdate--> 1975-05-26", "yes"),
      entry("Necessity:", "0.9"),
      entry("Answer:", "She was born on 1975-05-26."),
  };
}

// The parallel-track fixture graph.
inline const char* kParallelFixture =
    "QF1|Inception|PF1|director|QF2|Christopher Nolan\n"
    "QF1|Inception|PF7|publication date|2010-07-08|2010-07-08\n"
    "QF2|Christopher Nolan|PF8|date of birth|1970-07-30|1970-07-30\n"
    "QF2|Christopher Nolan|PF9|place of birth|QF6|London\n";

inline const char* kParallelQuestion = "Who directed Inception and when was the director born?";
inline const char* kFactDirector = "Inception was directed by Christopher Nolan.";
inline const char* kFactBirth = "Christopher Nolan was born on 1975-07-30.";
inline const char* kFactBirthFixed = "Christopher Nolan was born on 1970-07-30.";

inline std::vector<ScriptEntry> parallel_script(bool swap_fact_order = false) {
  std::string facts = swap_fact_order
                          ? std::string(kFactBirth) + " | Christopher Nolan\n" + kFactDirector +
                                " | Inception"
                          : std::string(kFactDirector) + " | Inception\n" + kFactBirth +
                                " | Christopher Nolan";
  return {
      entry("Question: " + std::string(kParallelQuestion) + "\nAnswer:",
            "Inception was directed by Christopher Nolan, who was born on 1975-07-30."),
      entry("Facts:", facts),
      entry("Fact: " + std::string(kFactDirector) + "\nSupported", "yes"),
      entry("Fact: " + std::string(kFactBirth) + "\nSupported", "no"),
      entry("Fact: " + std::string(kFactBirth) + "\nRewritten", kFactBirthFixed),
      entry("Necessity:", "0.9"),
      entry("Verification results:",
            "Inception was directed by Christopher Nolan, who was born on 1970-07-30."),
  };
}

}  // namespace dualtrack::testing
