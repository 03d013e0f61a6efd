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

// Generated by tools/embed_prompts.py from prompts/*.txt. Do not edit.

#pragma once

#include <array>
#include <string_view>
#include <utility>

namespace dualtrack::prompt_defaults {

inline constexpr std::string_view k_classification = R"prompt(Strictly evaluate whether this question requires multi-hop reasoning 
through shared entities. Rules:
    1. Answer ONLY with "yes" or "no"
    2. Only classify as "yes" if it requires connecting facts 
    through shared intermediary entities (A→B→C)
    3. Explicitly classify as "no" for these cases:
       - Direct single-entity attribute queries (age, birthplace)
       - Comparisons between independent entities (who is taller/older)
       - Multiple independent facts about the same entity
       - Simple relations that can be answered with one triplet (A→B)
    Examples:
    Q: "Where was the CEO of Microsoft born?" → yes 
    (Microsoft→CEO→birthplace)
    Q: "Who is older: Elon Musk or Jeff Bezos?" → no 
    (independent age checks)
    Q: "Which university did the inventor of Python attend?" → yes 
    (Python→inventor→university)
    Q: "What is the capital and population of France?" → no 
    (independent facts)
    Q: "Who directed Inception and what other films did they make?" → no 
    (subject stays constant)
    Q: "What is the tallest mountain and who first climbed it?" → no 
    (Independent facts with direct relations)

    Question: "{question}"
    Judgment (yes/no): )prompt";

inline constexpr std::string_view k_decompose = R"prompt(Break the response into atomic facts. Each fact must be a single claim that cannot be split further and that has a subject, a verb and an object.
Write one fact per line in the form: fact | subject
The subject must be the subject entity exactly as it is written in the fact. Output nothing else.
Response:
{response}
Facts:)prompt";

inline constexpr std::string_view k_draft_answer = R"prompt(Answer the question in a few complete sentences. State every fact you rely on explicitly.
Question: {question}
Answer:)prompt";

inline constexpr std::string_view k_extract_entity = R"prompt(Identify the central entity of the question, the named entity from which the reasoning starts. Reply with the entity name only, exactly as written in the question.
Question: {question}
Central entity:)prompt";

inline constexpr std::string_view k_generate_answer = R"prompt(Answer the question using only the knowledge graph triples below. Do not use any other knowledge. Reply with the answer only.
Question: {question}
Triples:
{paths}
Answer:)prompt";

inline constexpr std::string_view k_judge_fact = R"prompt(Decide whether the knowledge graph triples support the fact. Answer ONLY with "yes" or "no".
Triples:
{triples}
Fact: {fact}
Supported (yes/no):)prompt";

inline constexpr std::string_view k_necessity = R"prompt(Rate how necessary a knowledge graph relation is for answering the question. Relations that do not lead toward the answer, such as administrative or descriptive attributes unrelated to the question, are unnecessary.
Reply with a single decimal number between 0 and 1.
Examples:
Relation: "spouse"
Question: "Who is the wife of the director of Titanic?"
Necessity: 0.9
Relation: "official website"
Question: "Who is the wife of the director of Titanic?"
Necessity: 0.1
Relation: "author"
Question: "When was the author of Dune born?"
Necessity: 0.9
Relation: "mass"
Question: "When was the author of Dune born?"
Necessity: 0.1

Relation: "{relation}"
Question: "{question}"
Necessity:)prompt";

inline constexpr std::string_view k_rewrite_fact = R"prompt(The fact below conflicts with the knowledge graph triples. Rewrite it with the smallest edit that makes it consistent with the triples, keeping its subject and topic. Output only the rewritten fact.
Triples:
{triples}
Fact: {fact}
Rewritten fact:)prompt";

inline constexpr std::string_view k_select_relations = R"prompt(Choose at most three candidate relations that are most useful for continuing the reasoning path toward the answer. Reply with the candidate numbers, for example: [2] [5] [7]
Question: {question}
Current path: {path}
Candidates:
{candidates}
Selected:)prompt";

inline constexpr std::string_view k_sufficiency = R"prompt(Judge whether the reasoning path contains enough information to answer the question. Answer ONLY with "yes" or "no".
Question: {question}
Reasoning path: {path}
Sufficient (yes/no):)prompt";

inline constexpr std::string_view k_synthesize = R"prompt(Rewrite the draft answer so that it agrees with the verification results. Replace every revised claim with its corrected version, keep verified claims, and do not add new facts.
Question: {question}
Draft answer: {draft}
Verification results:
{verifications}
Corrected answer:)prompt";

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 11> kAll{{
    {"classification", k_classification},
    {"decompose", k_decompose},
    {"draft_answer", k_draft_answer},
    {"extract_entity", k_extract_entity},
    {"generate_answer", k_generate_answer},
    {"judge_fact", k_judge_fact},
    {"necessity", k_necessity},
    {"rewrite_fact", k_rewrite_fact},
    {"select_relations", k_select_relations},
    {"sufficiency", k_sufficiency},
    {"synthesize", k_synthesize},
}};

}  // namespace dualtrack::prompt_defaults
