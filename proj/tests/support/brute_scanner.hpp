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

#include <string>
#include <vector>

#include "setc/analysis/signatures.hpp"

namespace setc::testing {

struct BruteHit {
  std::string entry;
  std::size_t event_index;
  std::string field;
  std::string pattern;

  bool operator==(const BruteHit&) const = default;
  auto operator<=>(const BruteHit&) const = default;
};

// Naive reference scanner: serializes every event to JSON and tests every
// pattern of every rule against every searched field, with no shared code
// from the analysis module's matching path.
std::vector<BruteHit> brute_scan(const std::vector<analysis::EntryEvents>& entries,
                                 const std::vector<analysis::SignatureRule>& rules);

}  // namespace setc::testing
