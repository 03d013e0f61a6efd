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

#include <string>

#include "dualtrack/error.hpp"
#include "dualtrack/llm.hpp"
#include "dualtrack/prompts.hpp"
#include "dualtrack/types.hpp"

namespace dualtrack {

struct Classification {
  QuestionType type = QuestionType::kChained;
  std::string raw;        // the model's reply, verbatim
  bool fallback = false;  // reply had no yes/no; default track used
};

// The routing rules live entirely in the few-shot classification prompt.
// "yes" (needs chained reasoning through shared entities) routes to the
// chained track, "no" to the parallel one.
inline Classification classify(const Question& q, const LlmProvider& llm,
                               const PromptLibrary& prompts,
                               QuestionType default_track = QuestionType::kChained,
                               Diagnostics* diag = nullptr) {
  if (q.text.empty()) throw Error(ErrorCode::kInvalidArgument, "empty question");
  Classification out;
  out.raw = ask(llm, prompts, prompt_names::kClassification, {{"question", q.text}}, 8);
  try {
    out.type = parse_yes_no(out.raw) ? QuestionType::kChained : QuestionType::kParallel;
  } catch (const Error&) {
    out.type = default_track;
    out.fallback = true;
    warn(diag, "classifier reply unparseable; routed to default track " +
                   std::string(to_string(default_track)));
  }
  return out;
}

}  // namespace dualtrack
