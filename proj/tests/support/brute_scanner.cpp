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

#include "brute_scanner.hpp"

#include <regex>

#include <nlohmann/json.hpp>

namespace setc::testing {

namespace {

std::vector<std::string> values_of(const nlohmann::ordered_json& field) {
  std::vector<std::string> out;
  if (field.is_string()) {
    out.push_back(field.get<std::string>());
  } else if (field.is_array()) {
    for (const auto& item : field) out.push_back(item.is_string() ? item.get<std::string>() : item.dump());
  } else if (!field.is_null()) {
    out.push_back(field.dump());
  }
  return out;
}

bool pattern_hits(const std::string& pattern, const std::string& value) {
  if (pattern.size() >= 3 && pattern.compare(0, 3, "re:") == 0) {
    return std::regex_search(value, std::regex(pattern.substr(3), std::regex::ECMAScript));
  }
  return value.find(pattern) != std::string::npos;
}

}  // namespace

std::vector<BruteHit> brute_scan(const std::vector<analysis::EntryEvents>& entries,
                                 const std::vector<analysis::SignatureRule>& rules) {
  std::vector<BruteHit> hits;
  for (const auto& entry : entries) {
    for (std::size_t i = 0; i < entry.events.size(); ++i) {
      const auto doc = pipeline::to_json(entry.events[i]);
      for (const auto& rule : rules) {
        if (rule.entry_name != entry.entry_name) continue;
        for (const auto& field : rule.fields_searched) {
          if (!doc.contains(field)) continue;
          const auto values = values_of(doc[field]);
          for (const auto& pattern : rule.patterns) {
            for (const auto& v : values) {
              if (pattern_hits(pattern, v)) {
                hits.push_back({entry.entry_name, i, field, pattern});
                break;
              }
            }
          }
        }
      }
    }
  }
  return hits;
}

}  // namespace setc::testing
