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

// Command-line front end. Kept in a header so tests can drive it with an
// in-process transport and captured streams.
//
// Exit codes: 0 success, 1 usage or input error, 2 provider or transport
// failure.

#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dualtrack/dualtrack.hpp"

namespace dualtrack::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitRemote = 2;

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

using CliTransportFactory = std::function<std::shared_ptr<HttpTransport>(std::chrono::seconds)>;

struct Options {
  std::optional<std::string> config;
  std::optional<std::string> stub_script;
  std::string question;
  std::string question_id = "q";
  std::string dataset;
  std::string out;
  std::string triples;
};

inline bool remote_failure(const Answer& a) {
  return a.has_flag(flags::kTransportError) || a.has_flag(flags::kProviderError);
}

inline std::string read_question(const Options& opts, Io& io) {
  if (!opts.question.empty()) return opts.question;
  std::string all((std::istreambuf_iterator<char>(io.in)), std::istreambuf_iterator<char>());
  auto q = std::string(text::trim(all));
  if (q.empty()) throw Error(ErrorCode::kInvalidArgument, "no question given (use --question or stdin)");
  return q;
}

inline void print_trace(const SearchResult& result, std::ostream& out) {
  char scores[96];
  for (const auto& node : result.trace) {
    std::snprintf(scores, sizeof(scores), "  [hop %.4f, path %.4f]", node.relation_score,
                  node.path_score);
    out << std::string(node.depth * 2, ' ') << node.text << scores;
    if (!node.note.empty()) out << "  " << node.note;
    out << "\n";
  }
}

inline int run_with(const std::string& command, const Options& opts, Io& io,
                    const CliTransportFactory& make_transport, const EnvLookup& env) {
  std::optional<std::filesystem::path> config_path;
  if (opts.config) config_path = *opts.config;
  auto cfg = load_config(config_path, env);
  std::vector<ScriptEntry> script;
  if (opts.stub_script) script = load_stub_script(*opts.stub_script);

  // Input problems are reported before anything touches the network.
  Dataset dataset;
  if (command == "eval") dataset = load_dataset(std::filesystem::path(opts.dataset));
  std::optional<InMemoryStore> triples;
  if (command == "denoise") triples = InMemoryStore::from_file(opts.triples);

  TransportFactory factory;
  if (make_transport) {
    auto timeout = std::chrono::seconds(cfg.timeout_s);
    factory = [make_transport, timeout] { return make_transport(timeout); };
  }
  auto engine = Engine::build(cfg, std::move(script), factory);

  if (command == "eval") {
    AccScorer scorer;
    scorer.tau = cfg.tau;
    auto report = evaluate(
        dataset.questions, [&](const Question& q) { return engine.answer(q); }, scorer,
        static_cast<std::size_t>(cfg.parallelism), dataset.skipped);
    for (const auto& line : dataset.skipped) io.err << "skipped " << line << "\n";
    if (!opts.out.empty()) {
      std::ofstream f(opts.out);
      if (!f) throw Error(ErrorCode::kIo, "cannot write report " + opts.out);
      f << to_json(report).dump(2) << "\n";
    } else {
      io.out << to_json(report).dump(2) << "\n";
    }
    io.err << format_table(report);
    for (const auto& r : report.records) {
      if (r.flags.contains(flags::kTransportError) || r.flags.contains(flags::kProviderError)) {
        return kExitRemote;
      }
    }
    return kExitOk;
  }

  Question q{opts.question_id, read_question(opts, io), {}};

  if (command == "classify") {
    auto c = engine.classify(q);
    io.out << to_string(c.type) << "\n" << c.raw << "\n";
    return kExitOk;
  }
  if (command == "answer") {
    auto a = engine.answer(q);
    io.out << to_json(a).dump(2) << "\n";
    return remote_failure(a) ? kExitRemote : kExitOk;
  }
  if (command == "verify") {
    auto a = run_parallel_branch(q, engine.verify_config(), engine.services());
    io.out << to_json(a).dump(2) << "\n";
    return kExitOk;
  }
  if (command == "chain") {
    SearchResult search;
    auto a = run_chain_branch(q, engine.chain_config(), engine.services(), &search);
    print_trace(search, io.out);
    io.out << to_json(a).dump(2) << "\n";
    return kExitOk;
  }
  if (command == "denoise") {
    std::vector<CandidatePayload> candidates(triples->triples().begin(), triples->triples().end());
    Diagnostics diag;
    auto cfg_d = engine.denoise_config();
    auto relation_of = [](const CandidatePayload& p) -> const RelationRef& {
      return payload_relation(p);
    };
    auto after_rule = apply_rule_layer(candidates, cfg_d, relation_of, &diag);
    auto kept = apply_necessity_layer(after_rule, q, cfg_d, engine.llm(), engine.prompts(),
                                      relation_of, &diag);
    auto keys = [](const std::vector<CandidatePayload>& v) {
      std::set<std::string> out;
      for (const auto& p : v) out.insert(payload_key(p));
      return out;
    };
    auto rule_kept = keys(after_rule);
    auto final_kept = keys(kept);
    nlohmann::json j{{"kept", nlohmann::json::array()},
                     {"dropped_by_rule", nlohmann::json::array()},
                     {"dropped_by_necessity", nlohmann::json::array()},
                     {"warnings", diag.warnings}};
    for (const auto& p : candidates) {
      auto key = payload_key(p);
      const char* bucket = final_kept.contains(key)  ? "kept"
                           : rule_kept.contains(key) ? "dropped_by_necessity"
                                                     : "dropped_by_rule";
      j[bucket].push_back(verbalize(p));
    }
    io.out << j.dump(2) << "\n";
    return kExitOk;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown command " + command);
}

inline int run(int argc, const char* const* argv, Io io, const CliTransportFactory& make_transport,
               const EnvLookup& env) {
  CLI::App app{"Knowledge-graph question answering with classify-then-route reasoning", "dualtrack"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--config", opts.config, "JSON config file");
  app.add_option("--stub-script", opts.stub_script, "JSON list of {match_substring, response}");

  auto add_question = [&](CLI::App* sub) {
    sub->add_option("--question", opts.question, "question text (default: read stdin)");
    sub->add_option("--id", opts.question_id, "question id for the output");
  };
  add_question(app.add_subcommand("answer", "classify, route, and answer a question"));
  add_question(app.add_subcommand("classify", "print chained|parallel and the raw reply"));
  add_question(app.add_subcommand("verify", "run the fact-verification branch"));
  add_question(app.add_subcommand("chain", "run the path-search branch and print the tree"));
  auto* denoise_cmd = app.add_subcommand("denoise", "show which triples survive denoising");
  add_question(denoise_cmd);
  denoise_cmd->add_option("--triples", opts.triples, "triples file (fixture format)")->required();
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a JSONL dataset");
  eval_cmd->add_option("--dataset", opts.dataset, "JSONL dataset")->required();
  eval_cmd->add_option("--out", opts.out, "report path (default: stdout)");
  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    io.err << e.what() << "\n" << app.help();
    return kExitInput;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    return run_with(command, opts, io, make_transport, env);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return e.is_remote_failure() ? kExitRemote : kExitInput;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace dualtrack::cli
