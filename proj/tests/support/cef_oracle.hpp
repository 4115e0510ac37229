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

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace setc::testing {

// Independent reader for single CEF records, written from the format
// definition rather than from the emitter:
//
//   CEF:Version|Device Vendor|Device Product|Device Version|Device Event Class ID|Name|Severity|Extension
//
// Header fields may escape only `\|` and `\\`. Extension pairs are
// `key=value` separated by spaces; keys are alphanumeric (plus `_`), and a
// value may escape only `\=`, `\\`, `\n` and `\r`. Raw line breaks and bare
// `=` inside values are rejected.
struct CefRecord {
  int version = -1;
  std::vector<std::string> header;  // the six fields after the version
  std::vector<std::pair<std::string, std::string>> extensions;
};

struct CefParseResult {
  std::optional<CefRecord> record;
  std::string error;
};

CefParseResult parse_cef(const std::string& line);

}  // namespace setc::testing
