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

// cpp-httplib backed transport. Including this header pulls in httplib and,
// for https URLs, requires CPPHTTPLIB_OPENSSL_SUPPORT plus OpenSSL at link time.

#pragma once

#include <chrono>
#include <string>

#include <httplib.h>

#include "dualtrack/error.hpp"
#include "dualtrack/http.hpp"

namespace dualtrack {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // at least "/"
};

inline SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "URL has no scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout = std::chrono::seconds(30))
      : timeout_(timeout) {}

  HttpResponse get(const std::string& url, const HttpFields& params,
                   const HttpFields& headers) override {
    auto [origin, path] = split_url(url);
    auto client = make_client(origin);
    httplib::Params p(params.begin(), params.end());
    return convert(client.Get(path, p, to_headers(headers)));
  }

  HttpResponse post(const std::string& url, const std::string& body,
                    const std::string& content_type, const HttpFields& headers) override {
    auto [origin, path] = split_url(url);
    auto client = make_client(origin);
    return convert(client.Post(path, to_headers(headers), body, content_type));
  }

 private:
  httplib::Client make_client(const std::string& origin) const {
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    client.set_follow_location(true);
    return client;
  }

  static httplib::Headers to_headers(const HttpFields& fields) {
    return httplib::Headers(fields.begin(), fields.end());
  }

  static HttpResponse convert(const httplib::Result& result) {
    HttpResponse out;
    if (!result) {
      out.error = httplib::to_string(result.error());
      return out;
    }
    out.status = result->status;
    out.body = result->body;
    return out;
  }

  std::chrono::seconds timeout_;
};

}  // namespace dualtrack
