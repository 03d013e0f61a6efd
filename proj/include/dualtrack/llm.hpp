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
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dualtrack/error.hpp"
#include "dualtrack/text.hpp"

namespace dualtrack {

using Bindings = std::map<std::string, std::string>;

// A prompt body with `{name}` placeholders. Names are C identifiers; any other
// brace sequence is literal text.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  PromptTemplate(std::string name, std::string body)
      : name_(std::move(name)), body_(std::move(body)) {
    scan([&](std::string_view placeholder) {
      required_.insert(std::string(placeholder));
    }, [](std::string_view) {});
  }

  const std::string& name() const { return name_; }
  const std::string& body() const { return body_; }
  const std::set<std::string>& required_placeholders() const { return required_; }

  // Substitutes every placeholder once. Substituted values are not rescanned.
  std::string render(const Bindings& bindings) const {
    for (const auto& name : required_) {
      if (!bindings.contains(name)) {
        throw Error(ErrorCode::kMissingPlaceholder,
                    "template '" + name_ + "' needs '" + name + "'");
      }
    }
    std::string out;
    out.reserve(body_.size());
    scan([&](std::string_view placeholder) {
      out += bindings.at(std::string(placeholder));
    }, [&](std::string_view literal) { out += literal; });
    return out;
  }

 private:
  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) {
    return ident_start(c) || (c >= '0' && c <= '9');
  }

  template <typename OnPlaceholder, typename OnLiteral>
  void scan(OnPlaceholder&& on_placeholder, OnLiteral&& on_literal) const {
    std::string_view body = body_;
    std::size_t literal_start = 0;
    std::size_t i = 0;
    while (i < body.size()) {
      if (body[i] == '{' && i + 1 < body.size() && ident_start(body[i + 1])) {
        std::size_t j = i + 1;
        while (j < body.size() && ident_char(body[j])) ++j;
        if (j < body.size() && body[j] == '}') {
          on_literal(body.substr(literal_start, i - literal_start));
          on_placeholder(body.substr(i + 1, j - i - 1));
          i = j + 1;
          literal_start = i;
          continue;
        }
      }
      ++i;
    }
    on_literal(body.substr(literal_start));
  }

  std::string name_;
  std::string body_;
  std::set<std::string> required_;
};

struct CompletionRequest {
  std::string prompt;
  int max_tokens = 512;
  double temperature = 0.0;
};

struct CompletionResponse {
  std::string text;
  std::string provider;
};

class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual CompletionResponse complete(const CompletionRequest& request) const = 0;
};

struct ScriptEntry {
  std::string match_substring;
  std::string response;
};

// Parses the stub script format: a JSON list of
// {"match_substring": str, "response": str}.
inline std::vector<ScriptEntry> parse_stub_script(const nlohmann::json& doc) {
  if (!doc.is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "stub script must be a JSON list");
  }
  std::vector<ScriptEntry> entries;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("match_substring") ||
        !item.contains("response") || !item["match_substring"].is_string() ||
        !item["response"].is_string()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "stub script entries need string 'match_substring' and 'response'");
    }
    entries.push_back({item["match_substring"].get<std::string>(),
                       item["response"].get<std::string>()});
  }
  return entries;
}

inline std::vector<ScriptEntry> load_stub_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open stub script " + path.string());
  auto doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kInvalidArgument, "stub script is not valid JSON: " + path.string());
  }
  return parse_stub_script(doc);
}

// Deterministic provider for offline runs. Scripted mode answers with the
// response of the longest matching substring key (earlier entry on equal
// length) and falls back to a default; strict mode raises ScriptMiss instead;
// echo mode returns the prompt.
class StubProvider final : public LlmProvider {
 public:
  enum class Mode { kScripted, kStrict, kEcho };

  explicit StubProvider(std::vector<ScriptEntry> script = {},
                        Mode mode = Mode::kScripted,
                        std::string default_response = "")
      : script_(std::move(script)),
        mode_(mode),
        default_response_(std::move(default_response)) {}

  static StubProvider echo() { return StubProvider({}, Mode::kEcho); }

  CompletionResponse complete(const CompletionRequest& request) const override {
    calls_.fetch_add(1);
    {
      std::lock_guard lock(log_mu_);
      prompts_.push_back(request.prompt);
    }
    if (mode_ == Mode::kEcho) return {request.prompt, "stub"};
    const ScriptEntry* best = nullptr;
    for (const auto& entry : script_) {
      if (request.prompt.find(entry.match_substring) == std::string::npos) continue;
      if (best == nullptr || entry.match_substring.size() > best->match_substring.size()) {
        best = &entry;
      }
    }
    if (best != nullptr) return {best->response, "stub"};
    if (mode_ == Mode::kStrict) {
      throw Error(ErrorCode::kScriptMiss,
                  "no scripted response for prompt starting '" +
                      request.prompt.substr(0, 60) + "'");
    }
    return {default_response_, "stub"};
  }

  std::size_t calls() const { return calls_.load(); }

  std::vector<std::string> prompts() const {
    std::lock_guard lock(log_mu_);
    return prompts_;
  }

 private:
  std::vector<ScriptEntry> script_;
  Mode mode_;
  std::string default_response_;
  mutable std::atomic<std::size_t> calls_{0};
  mutable std::mutex log_mu_;
  mutable std::vector<std::string> prompts_;
};

inline StubProvider::Mode parse_stub_mode(std::string_view s) {
  if (s == "scripted") return StubProvider::Mode::kScripted;
  if (s == "strict") return StubProvider::Mode::kStrict;
  if (s == "echo") return StubProvider::Mode::kEcho;
  throw Error(ErrorCode::kInvalidArgument, "unknown stub mode '" + std::string(s) + "'");
}

// First standalone alphabetic token equal to "yes" or "no", case-insensitive.
inline bool parse_yes_no(std::string_view reply) {
  std::string word;
  auto check = [&]() -> int {
    if (word == "yes") return 1;
    if (word == "no") return 0;
    return -1;
  };
  for (char c : reply) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      word.push_back(text::fold(c));
      continue;
    }
    if (int v = check(); v >= 0) return v == 1;
    word.clear();
  }
  if (int v = check(); v >= 0) return v == 1;
  throw Error(ErrorCode::kUnparseable,
              "expected yes/no, got '" + std::string(reply.substr(0, 80)) + "'");
}

// First decimal number in the reply, clamped to [0, 1].
inline double parse_unit_score(std::string_view reply) {
  for (std::size_t i = 0; i < reply.size(); ++i) {
    char c = reply[i];
    bool digit = c >= '0' && c <= '9';
    bool dot_digit = c == '.' && i + 1 < reply.size() && reply[i + 1] >= '0' &&
                     reply[i + 1] <= '9';
    if (!digit && !dot_digit) continue;
    std::size_t start = i;
    if (start > 0 && (reply[start - 1] == '-' || reply[start - 1] == '+')) --start;
    std::size_t end = i;
    while (end < reply.size() && reply[end] >= '0' && reply[end] <= '9') ++end;
    if (end < reply.size() && reply[end] == '.') {
      ++end;
      while (end < reply.size() && reply[end] >= '0' && reply[end] <= '9') ++end;
    }
    std::string number(reply.substr(start, end - start));
    double v = std::strtod(number.c_str(), nullptr);
    return std::clamp(v, 0.0, 1.0);
  }
  throw Error(ErrorCode::kUnparseable,
              "expected a number, got '" + std::string(reply.substr(0, 80)) + "'");
}

}  // namespace dualtrack
