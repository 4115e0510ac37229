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

#include "setc/analysis/table.hpp"

namespace setc::analysis {

namespace {

// Pipes would split the cell.
std::string cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

}  // namespace

std::string render_table(const std::vector<AnalysisResult>& results,
                         const std::map<std::string, std::string>& descriptions) {
  std::string out = "| CVE | Description | Signature in Logs |\n|---|---|---|\n";
  for (const auto& r : results) {
    auto it = descriptions.find(r.entry_name);
    out += "| " + cell(r.entry_name) + " | " + (it == descriptions.end() ? "" : cell(it->second)) + " | " +
           (r.signature_in_logs ? "True" : "False") + " |\n";
  }
  return out;
}

}  // namespace setc::analysis
