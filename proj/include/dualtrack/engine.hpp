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

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dualtrack/chain_branch.hpp"
#include "dualtrack/classifier.hpp"
#include "dualtrack/config.hpp"
#include "dualtrack/error.hpp"
#include "dualtrack/evidence.hpp"
#include "dualtrack/http.hpp"
#include "dualtrack/kg_store.hpp"
#include "dualtrack/llm.hpp"
#include "dualtrack/memory_store.hpp"
#include "dualtrack/prompts.hpp"
#include "dualtrack/remote_providers.hpp"
#include "dualtrack/scorer.hpp"
#include "dualtrack/services.hpp"
#include "dualtrack/sparql_store.hpp"
#include "dualtrack/verify_branch.hpp"

namespace dualtrack {

// Supplies the network transport. Called only when some configured component
// actually talks HTTP.
using TransportFactory = std::function<std::shared_ptr<HttpTransport>()>;

// Classify, then run the matching branch. Owns every provider; const methods
// are safe to call from several threads.
class Engine {
 public:
  Engine(EngineConfig config, std::unique_ptr<KgStore> kg, std::unique_ptr<LlmProvider> llm,
         std::unique_ptr<EmbeddingProvider> embedder, std::unique_ptr<RerankProvider> reranker,
         PromptLibrary prompts)
      : config_(std::move(config)),
        kg_(std::move(kg)),
        llm_(std::move(llm)),
        embedder_(std::move(embedder)),
        reranker_(std::move(reranker)),
        prompts_(std::move(prompts)) {
    validate(config_);
  }

  static Engine build(const EngineConfig& cfg, std::vector<ScriptEntry> script,
                      const TransportFactory& make_transport) {
    validate(cfg);
    std::shared_ptr<HttpTransport> transport;
    auto net = [&]() -> std::shared_ptr<HttpTransport> {
      if (!transport) {
        if (!make_transport) {
          throw Error(ErrorCode::kInvalidArgument, "configuration needs HTTP but no transport is available");
        }
        transport = make_transport();
      }
      return transport;
    };
    RetryPolicy retry{3, std::chrono::milliseconds(cfg.retry_base_ms)};

    std::unique_ptr<KgStore> kg;
    if (cfg.kg_store == "fixture") {
      kg = std::make_unique<InMemoryStore>(InMemoryStore::from_file(cfg.kg_fixture));
    } else {
      SparqlOptions options;
      if (!cfg.cache_dir.empty()) options.cache_dir = cfg.cache_dir;
      options.retry = retry;
      kg = std::make_unique<SparqlStore>(cfg.sparql_url, net(), std::move(options));
    }

    std::unique_ptr<LlmProvider> llm;
    if (cfg.llm_provider == "http") {
      llm = std::make_unique<HttpLlmProvider>(cfg.llm_url, net(), retry, real_sleeper(),
                                              static_cast<int>(cfg.llm_max_tokens));
    } else {
      llm = std::make_unique<StubProvider>(std::move(script), parse_stub_mode(cfg.stub_mode),
                                           cfg.stub_default);
    }

    auto dim = static_cast<std::size_t>(cfg.embedding_dimension);
    std::unique_ptr<EmbeddingProvider> embedder;
    if (cfg.embedding_provider == "http") {
      embedder = std::make_unique<HttpEmbeddingProvider>(cfg.embedding_url, dim, net(), retry);
    } else {
      embedder = std::make_unique<HashEmbedding>(dim);
    }

    std::unique_ptr<RerankProvider> reranker;
    if (cfg.rerank_provider == "http") {
      reranker = std::make_unique<HttpRerankProvider>(cfg.rerank_url, net(), retry);
    } else if (cfg.rerank_provider == "constant") {
      reranker = std::make_unique<ConstantReranker>(cfg.rerank_constant);
    } else {
      reranker = std::make_unique<OverlapReranker>();
    }

    auto prompts = PromptLibrary::defaults();
    if (!cfg.prompts_dir.empty()) prompts.load_dir(cfg.prompts_dir);

    return Engine(cfg, std::move(kg), std::move(llm), std::move(embedder), std::move(reranker),
                  std::move(prompts));
  }

  Services services() const { return Services{*kg_, *llm_, *embedder_, *reranker_, prompts_}; }

  ScoringConfig scoring_config() const {
    return ScoringConfig{config_.alpha, static_cast<std::size_t>(config_.top_n),
                         static_cast<std::size_t>(config_.embedding_dimension)};
  }

  DenoiseConfig denoise_config() const {
    return DenoiseConfig{config_.k_invalid, config_.theta_necessity};
  }

  VerifyConfig verify_config() const {
    return VerifyConfig{scoring_config(), denoise_config(),
                        static_cast<std::size_t>(config_.verify_top_k), config_.link_floor};
  }

  ChainConfig chain_config() const {
    ChainConfig c;
    c.search.d_max = static_cast<std::size_t>(config_.d_max);
    c.search.w_max = static_cast<std::size_t>(config_.w_max);
    c.search.theta_search = config_.theta_search;
    c.search.llm_select_trigger = static_cast<std::size_t>(config_.llm_select_trigger);
    c.search.top_k_paths = static_cast<std::size_t>(config_.top_k_paths);
    c.search.expand_budget = static_cast<std::size_t>(config_.expand_budget);
    c.search.sufficiency_mode = parse_sufficiency_mode(config_.sufficiency_mode);
    c.scoring = scoring_config();
    c.denoise = denoise_config();
    c.link_floor = config_.link_floor;
    return c;
  }

  QuestionType default_track() const { return parse_question_type(config_.default_track); }

  Classification classify(const Question& q, Diagnostics* diag = nullptr) const {
    return dualtrack::classify(q, *llm_, prompts_, default_track(), diag);
  }

  // Branch failures come back as flagged answers; nothing escapes.
  Answer answer(const Question& q) const {
    Diagnostics diag;
    std::optional<Classification> routed;
    Answer a;
    try {
      routed = classify(q, &diag);
      if (routed->type == QuestionType::kChained) {
        a = run_chain_branch(q, chain_config(), services());
      } else {
        a = run_parallel_branch(q, verify_config(), services());
      }
    } catch (const Error& e) {
      a = Answer{};
      a.flags.insert(failure_flag(e));
      diag.warn(e.what());
    } catch (const std::exception& e) {
      a = Answer{};
      a.flags.insert(flags::kFailed);
      diag.warn(e.what());
    }
    a.question_id = q.id;
    if (routed) {
      a.track = routed->type;
      a.classifier_raw = routed->raw;
      if (routed->fallback) a.flags.insert(flags::kClassifierFallback);
    } else {
      a.track = default_track();
    }
    a.warnings.insert(a.warnings.begin(), diag.warnings.begin(), diag.warnings.end());
    return a;
  }

  static const char* failure_flag(const Error& e) {
    if (e.code() == ErrorCode::kTransport) return flags::kTransportError;
    if (e.is_remote_failure()) return flags::kProviderError;
    return flags::kFailed;
  }

  const EngineConfig& config() const { return config_; }
  const KgStore& kg() const { return *kg_; }
  const LlmProvider& llm() const { return *llm_; }
  const PromptLibrary& prompts() const { return prompts_; }

 private:
  EngineConfig config_;
  std::unique_ptr<KgStore> kg_;
  std::unique_ptr<LlmProvider> llm_;
  std::unique_ptr<EmbeddingProvider> embedder_;
  std::unique_ptr<RerankProvider> reranker_;
  PromptLibrary prompts_;
};

}  // namespace dualtrack
