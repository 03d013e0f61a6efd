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

// Dataset loading and answer metrics.
//   EM:  1 iff the prediction equals a gold answer character for character
//        (outer whitespace stripped, case-sensitive).
//   ACC: 1 iff max over golds of similarity(pred, gold) >= tau.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dualtrack/error.hpp"
#include "dualtrack/evidence.hpp"
#include "dualtrack/text.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

inline int exact_match(std::string_view pred, const std::vector<std::string>& golds) {
  auto p = text::trim(pred);
  for (const auto& g : golds) {
    if (p == text::trim(g)) return 1;
  }
  return 0;
}

using SimilarityFn = std::function<double(std::string_view, std::string_view)>;

struct AccScorer {
  SimilarityFn similarity = [](std::string_view a, std::string_view b) {
    return text::token_jaccard(a, b);
  };
  double tau = 0.5;
};

// Throws kProvider when the similarity function fails or returns NaN.
inline int semantic_acc(std::string_view pred, const std::vector<std::string>& golds,
                        const AccScorer& scorer) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : golds) {
    double v = 0.0;
    try {
      v = scorer.similarity(pred, g);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kProvider, std::string("similarity scorer failed: ") + e.what());
    }
    if (std::isnan(v)) throw Error(ErrorCode::kProvider, "similarity scorer returned NaN");
    best = std::max(best, v);
  }
  return best >= scorer.tau ? 1 : 0;
}

struct Dataset {
  std::vector<Question> questions;
  std::vector<std::string> skipped;  // one message per rejected line
};

// JSONL: {"id": str, "question": str, "gold_answers": [str, ...]} per line.
// Blank lines are ignored; malformed lines are skipped and reported.
inline Dataset load_dataset(std::istream& in) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto doc = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    auto skip = [&](const std::string& why) {
      ds.skipped.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    if (doc.is_discarded() || !doc.is_object()) {
      skip("not a JSON object");
      continue;
    }
    if (!doc.contains("id") || !doc["id"].is_string() || !doc.contains("question") ||
        !doc["question"].is_string() || doc["question"].get<std::string>().empty()) {
      skip("needs string 'id' and non-empty string 'question'");
      continue;
    }
    Question q{doc["id"].get<std::string>(), doc["question"].get<std::string>(), {}};
    if (doc.contains("gold_answers")) {
      const auto& golds = doc["gold_answers"];
      if (!golds.is_array() ||
          !std::all_of(golds.begin(), golds.end(), [](const auto& g) { return g.is_string(); })) {
        skip("'gold_answers' must be a list of strings");
        continue;
      }
      q.gold_answers = golds.get<std::vector<std::string>>();
    }
    ds.questions.push_back(std::move(q));
  }
  return ds;
}

inline Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open dataset " + path.string());
  return load_dataset(in);
}

struct EvalRecord {
  std::string question_id;
  std::string predicted;
  std::vector<std::string> gold;
  int em = 0;
  int acc = 0;
  bool acc_valid = true;
  QuestionType track = QuestionType::kChained;
  std::int64_t latency_ms = 0;
  std::set<std::string> flags;
  std::string error;
};

struct MetricSummary {
  std::size_t n = 0;
  std::size_t acc_n = 0;           // records with a valid ACC
  std::optional<double> em;        // unset when n == 0
  std::optional<double> acc;       // unset when acc_n == 0
};

struct Aggregate {
  MetricSummary overall;
  std::size_t invalid = 0;
  std::size_t skipped = 0;
  std::map<std::string, MetricSummary> per_track;
};

struct EvalReport {
  std::vector<EvalRecord> records;
  Aggregate aggregate;
  std::vector<std::string> skipped_lines;
};

inline MetricSummary summarize(const std::vector<const EvalRecord*>& records) {
  MetricSummary s;
  s.n = records.size();
  long em_sum = 0, acc_sum = 0;
  for (const auto* r : records) {
    em_sum += r->em;
    if (r->acc_valid) {
      ++s.acc_n;
      acc_sum += r->acc;
    }
  }
  if (s.n > 0) s.em = static_cast<double>(em_sum) / static_cast<double>(s.n);
  if (s.acc_n > 0) s.acc = static_cast<double>(acc_sum) / static_cast<double>(s.acc_n);
  return s;
}

inline Aggregate aggregate(const std::vector<EvalRecord>& records, std::size_t skipped = 0) {
  Aggregate agg;
  agg.skipped = skipped;
  std::vector<const EvalRecord*> all;
  std::map<std::string, std::vector<const EvalRecord*>> by_track;
  for (const auto& r : records) {
    all.push_back(&r);
    by_track[std::string(to_string(r.track))].push_back(&r);
    if (!r.acc_valid) ++agg.invalid;
  }
  agg.overall = summarize(all);
  for (const auto& [track, rs] : by_track) agg.per_track[track] = summarize(rs);
  return agg;
}

using AnswerFn = std::function<Answer(const Question&)>;

inline EvalRecord evaluate_one(const Question& q, const AnswerFn& engine, const AccScorer& scorer) {
  EvalRecord r;
  r.question_id = q.id;
  r.gold = q.gold_answers;
  auto start = std::chrono::steady_clock::now();
  try {
    auto answer = engine(q);
    r.predicted = answer.text;
    r.track = answer.track;
    r.flags = answer.flags;
  } catch (const std::exception& e) {
    r.error = e.what();
    r.flags.insert(flags::kFailed);
  }
  r.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  r.em = exact_match(r.predicted, r.gold);
  try {
    r.acc = semantic_acc(r.predicted, r.gold, scorer);
  } catch (const Error& e) {
    r.acc_valid = false;
    r.acc = 0;
    if (r.error.empty()) r.error = e.what();
  }
  return r;
}

// Runs every question through `engine` on up to `parallelism` threads.
// Records keep dataset order.
inline EvalReport evaluate(const std::vector<Question>& questions, const AnswerFn& engine,
                           const AccScorer& scorer, std::size_t parallelism = 1,
                           std::vector<std::string> skipped_lines = {}) {
  EvalReport report;
  report.records.resize(questions.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < questions.size(); i = next.fetch_add(1)) {
      report.records[i] = evaluate_one(questions[i], engine, scorer);
    }
  };
  std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(1, questions.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  report.aggregate = aggregate(report.records, skipped_lines.size());
  report.skipped_lines = std::move(skipped_lines);
  return report;
}

inline nlohmann::json to_json(const MetricSummary& s) {
  nlohmann::json j{{"n", s.n}, {"acc_n", s.acc_n}};
  j["em"] = s.em ? nlohmann::json(*s.em) : nlohmann::json(nullptr);
  j["acc"] = s.acc ? nlohmann::json(*s.acc) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) {
    nlohmann::json j{{"question_id", r.question_id},
                     {"predicted", r.predicted},
                     {"gold", r.gold},
                     {"em", r.em},
                     {"acc", r.acc_valid ? nlohmann::json(r.acc) : nlohmann::json(nullptr)},
                     {"track", to_string(r.track)},
                     {"latency_ms", r.latency_ms},
                     {"flags", r.flags}};
    if (!r.error.empty()) j["error"] = r.error;
    records.push_back(std::move(j));
  }
  const auto& agg = report.aggregate;
  nlohmann::json per_track = nlohmann::json::object();
  for (const auto& [track, s] : agg.per_track) per_track[track] = to_json(s);
  auto overall = to_json(agg.overall);
  return {{"records", records},
          {"aggregate",
           {{"em", overall["em"]},
            {"acc", overall["acc"]},
            {"n", agg.overall.n},
            {"invalid", agg.invalid},
            {"skipped", agg.skipped},
            {"per_track", per_track}}},
          {"skipped_lines", report.skipped_lines}};
}

inline std::string format_percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", *v * 100.0);
  return buf;
}

inline std::string format_table(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %6s %8s %8s\n", "track", "n", "EM%", "ACC%");
  out << line;
  auto row = [&](const std::string& name, const MetricSummary& s) {
    std::snprintf(line, sizeof(line), "%-12s %6zu %8s %8s\n", name.c_str(), s.n,
                  format_percent(s.em).c_str(), format_percent(s.acc).c_str());
    out << line;
  };
  for (const auto& [track, s] : report.aggregate.per_track) row(track, s);
  row("all", report.aggregate.overall);
  if (report.aggregate.invalid > 0) {
    out << "invalid ACC records (excluded): " << report.aggregate.invalid << "\n";
  }
  if (report.aggregate.skipped > 0) {
    out << "skipped dataset lines: " << report.aggregate.skipped << "\n";
  }
  return out.str();
}

}  // namespace dualtrack
