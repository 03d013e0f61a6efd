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
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dualtrack/error.hpp"

namespace dualtrack {

using HttpFields = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;  // 0: no response (connect failure, timeout)
  std::string body;
  std::string error;

  bool ok() const { return status >= 200 && status < 300; }
  bool retryable() const { return status == 0 || status >= 500; }
};

// Network boundary for every remote provider. The library never opens a
// socket itself; the CLI wires in a concrete transport and tests substitute
// scripted ones.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;

  virtual HttpResponse get(const std::string& url, const HttpFields& params,
                           const HttpFields& headers) = 0;

  virtual HttpResponse post(const std::string& url, const std::string& body,
                            const std::string& content_type,
                            const HttpFields& headers) = 0;
};

struct RetryPolicy {
  int retries = 3;
  std::chrono::milliseconds base_delay{500};
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

// Retries 5xx and no-response outcomes with exponential backoff. Throws
// kTransport when the final outcome is not 2xx.
inline HttpResponse send_with_retry(const std::function<HttpResponse()>& send,
                                    const RetryPolicy& policy,
                                    const Sleeper& sleep,
                                    const std::string& what) {
  HttpResponse resp;
  auto delay = policy.base_delay;
  for (int attempt = 0;; ++attempt) {
    resp = send();
    if (resp.ok()) return resp;
    if (!resp.retryable() || attempt >= policy.retries) break;
    if (sleep) sleep(delay);
    delay *= 2;
  }
  std::string detail = resp.status == 0
                           ? (resp.error.empty() ? "no response" : resp.error)
                           : "HTTP " + std::to_string(resp.status);
  throw Error(ErrorCode::kTransport, what + ": " + detail);
}

}  // namespace dualtrack
