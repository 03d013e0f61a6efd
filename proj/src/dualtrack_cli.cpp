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

#include <chrono>
#include <iostream>
#include <memory>

#include "dualtrack/cli.hpp"
#include "dualtrack/http_transport.hpp"

int main(int argc, char** argv) {
  dualtrack::cli::Io io{std::cin, std::cout, std::cerr};
  auto make_transport = [](std::chrono::seconds timeout) -> std::shared_ptr<dualtrack::HttpTransport> {
    return std::make_shared<dualtrack::HttplibTransport>(timeout);
  };
  return dualtrack::cli::run(argc, argv, io, make_transport, dualtrack::process_env());
}
