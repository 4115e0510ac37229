// Copyright 2026 The SETC Authors
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

#include <random>
#include <string>
#include <vector>

#include "setc/analysis/signatures.hpp"
#include "setc/telemetry/transaction.hpp"

namespace setc::testing {

using Rng = std::mt19937_64;

// String drawn from an alphabet heavy in CEF/JSON metacharacters (`|`, `\`,
// `=`, spaces, line breaks, multi-byte UTF-8). May be empty.
std::string hostile_string(Rng& rng, std::size_t max_len = 24);

// Transaction whose text fields are all hostile strings (possibly empty).
telemetry::HttpTransaction random_transaction(Rng& rng);

struct SignatureInstance {
  std::vector<analysis::EntryEvents> entries;
  std::vector<analysis::SignatureRule> rules;
};

// Small alphabet so that substring and regex patterns hit often.
SignatureInstance random_signature_instance(Rng& rng);

}  // namespace setc::testing
