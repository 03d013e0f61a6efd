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

#include <algorithm>
#include <string>
#include <string_view>

#include "dualtrack/error.hpp"
#include "dualtrack/kg_store.hpp"
#include "dualtrack/llm.hpp"
#include "dualtrack/prompts.hpp"
#include "dualtrack/scorer.hpp"
#include "dualtrack/text.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

// Non-owning bundle of the providers a branch talks to.
struct Services {
  const KgStore& kg;
  const LlmProvider& llm;
  const EmbeddingProvider& embedder;
  const RerankProvider& reranker;
  const PromptLibrary& prompts;
};

// Maps a surface string to an item. Exact label lookup first; otherwise the
// candidate with the highest normalized edit similarity (case-folded) at or
// above `floor`, ties going to the lexicographically smaller id.
inline EntityRef link_entity(std::string_view surface, const KgStore& kg, double floor = 0.8) {
  auto trimmed = text::trim(surface);
  if (trimmed.empty()) throw Error(ErrorCode::kLinkFailure, "empty subject surface");
  if (trimmed.find('\n') != std::string_view::npos) {
    throw Error(ErrorCode::kLinkFailure, "subject surface spans several lines");
  }
  if (auto exact = kg.resolve_entity_id(trimmed)) return *exact;

  const EntityRef* best = nullptr;
  double best_sim = -1.0;
  auto candidates = kg.link_candidates(trimmed);
  for (const auto& c : candidates) {
    double sim = text::normalized_similarity(trimmed, c.label);
    if (sim > best_sim || (sim == best_sim && best != nullptr && c.id < best->id)) {
      best = &c;
      best_sim = sim;
    }
  }
  if (best == nullptr || best_sim < floor) {
    throw Error(ErrorCode::kLinkFailure, "no entity label close to '" + std::string(trimmed) + "'");
  }
  return *best;
}

inline std::string format_triple(const Triple& t) {
  return "(" + t.subject.display() + ", " + t.relation.display() + ", " +
         object_label(t.object) + ")";
}

// Strips a leading list marker ("- ", "* ", "3. ", "2) ") and wrapping quotes.
inline std::string_view strip_list_marker(std::string_view line) {
  line = text::trim(line);
  if (line.starts_with("- ") || line.starts_with("* ")) return text::trim(line.substr(2));
  if (line.starts_with("\xE2\x80\xA2")) return text::trim(line.substr(3));  // bullet
  std::size_t i = 0;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i > 0 && i + 1 < line.size() && (line[i] == '.' || line[i] == ')') && line[i + 1] == ' ') {
    return text::trim(line.substr(i + 2));
  }
  return line;
}

inline std::string_view strip_quotes(std::string_view s) {
  s = text::trim(s);
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return text::trim(s.substr(1, s.size() - 2));
  }
  return s;
}

}  // namespace dualtrack
