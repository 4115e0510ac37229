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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "setc/pipeline/cim.hpp"

namespace setc::analysis {

std::vector<std::string> default_fields_searched();

struct SignatureRule {
  std::string entry_name;
  // Case-sensitive substrings, or ECMAScript regexes with the `re:` prefix.
  std::vector<std::string> patterns;
  std::vector<std::string> fields_searched = default_fields_searched();
  std::optional<std::string> description;

  bool operator==(const SignatureRule&) const = default;
};

// Rules file: a JSON array of rules, or an object with a "rules" array.
// Throws SchemaError (path like `rules[2].patterns`) or ParseError.
std::vector<SignatureRule> parse_rules(std::string_view json_text);
std::vector<SignatureRule> load_rules(const std::filesystem::path& path);

struct MatchedEvent {
  std::size_t event_index = 0;
  std::string field;
  std::string pattern;

  bool operator==(const MatchedEvent&) const = default;
};

struct AnalysisResult {
  std::string entry_name;
  bool signature_in_logs = false;
  std::vector<MatchedEvent> matched_events;

  bool operator==(const AnalysisResult&) const = default;
};

struct EntryEvents {
  std::string entry_name;
  std::vector<pipeline::CimHttpEvent> events;
};

struct AnalysisOutput {
  std::vector<AnalysisResult> results;
  // One line per rule whose entry is not among the analyzed entries.
  std::vector<std::string> warnings;
};

// Results follow the order of `entries`; entries without a rule are skipped.
// Several rules for one entry are merged into one result.
AnalysisOutput match_signatures(const std::vector<EntryEvents>& entries, const std::vector<SignatureRule>& rules);

// CIM events of a session directory. Entry order comes from report.json or
// replay.json when present, otherwise the sorted `<entry>.cim-http.ndjson`
// file names.
std::vector<EntryEvents> load_session_events(const std::filesystem::path& session_dir);

void to_json(nlohmann::json& j, const AnalysisResult& result);

}  // namespace setc::analysis
