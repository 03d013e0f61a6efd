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

// Everything except the httplib transport, which lives in http_transport.hpp.

#pragma once

#include "dualtrack/chain_branch.hpp"
#include "dualtrack/classifier.hpp"
#include "dualtrack/config.hpp"
#include "dualtrack/denoiser.hpp"
#include "dualtrack/engine.hpp"
#include "dualtrack/error.hpp"
#include "dualtrack/eval.hpp"
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
#include "dualtrack/text.hpp"
#include "dualtrack/types.hpp"
#include "dualtrack/verify_branch.hpp"
