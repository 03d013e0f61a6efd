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
#include <map>
#include <sstream>
#include <string>

#include "dualtrack/error.hpp"
#include "dualtrack/llm.hpp"
#include "dualtrack/prompt_defaults.hpp"

namespace dualtrack {

namespace prompt_names {
inline constexpr const char* kClassification = "classification";
inline constexpr const char* kDraftAnswer = "draft_answer";
inline constexpr const char* kDecompose = "decompose";
inline constexpr const char* kJudgeFact = "judge_fact";
inline constexpr const char* kRewriteFact = "rewrite_fact";
inline constexpr const char* kSynthesize = "synthesize";
inline constexpr const char* kExtractEntity = "extract_entity";
inline constexpr const char* kSelectRelations = "select_relations";
inline constexpr const char* kSufficiency = "sufficiency";
inline constexpr const char* kGenerateAnswer = "generate_answer";
inline constexpr const char* kNecessity = "necessity";
}  // namespace prompt_names

// Named prompt templates. Starts from the built-in set (mirrors prompts/);
// load_dir() replaces any template that has a `<name>.txt` file.
class PromptLibrary {
 public:
  static PromptLibrary defaults() {
    PromptLibrary lib;
    for (const auto& [name, body] : prompt_defaults::kAll) {
      lib.set(PromptTemplate(std::string(name), std::string(body)));
    }
    return lib;
  }

  // Template files hold the body followed by one trailing newline.
  void load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
      throw Error(ErrorCode::kIo, "prompt directory not found: " + dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".txt") continue;
      std::ifstream in(entry.path(), std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      std::string body = buf.str();
      if (!body.empty() && body.back() == '\n') body.pop_back();
      set(PromptTemplate(entry.path().stem().string(), std::move(body)));
    }
  }

  void set(PromptTemplate t) {
    auto name = t.name();
    templates_.insert_or_assign(std::move(name), std::move(t));
  }

  const PromptTemplate& get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) {
      throw Error(ErrorCode::kInvalidArgument, "no prompt template named '" + name + "'");
    }
    return it->second;
  }

  std::string render(const std::string& name, const Bindings& bindings) const {
    return get(name).render(bindings);
  }

  const std::map<std::string, PromptTemplate>& all() const { return templates_; }

 private:
  std::map<std::string, PromptTemplate> templates_;
};

// Renders `name` and sends it at temperature 0.
inline std::string ask(const LlmProvider& llm, const PromptLibrary& prompts,
                       const std::string& name, const Bindings& bindings,
                       int max_tokens = 512) {
  CompletionRequest request;
  request.prompt = prompts.render(name, bindings);
  request.max_tokens = max_tokens;
  request.temperature = 0.0;
  return llm.complete(request).text;
}

}  // namespace dualtrack
