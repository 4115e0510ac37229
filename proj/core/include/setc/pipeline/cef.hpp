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
#include <string_view>
#include <utility>
#include <vector>

#include "setc/telemetry/transaction.hpp"

namespace setc::pipeline {

// A Common Event Format record: seven header fields followed by key=value
// extensions. Values are held unescaped; render() applies escaping.
struct CefLine {
  int version = 0;
  std::string vendor;
  std::string product;
  std::string device_version;
  std::string event_class_id;
  std::string name;
  int severity = 0;
  std::vector<std::pair<std::string, std::string>> extensions;

  std::string render() const;

  bool operator==(const CefLine&) const = default;
};

// Header fields: `\` -> `\\`, `|` -> `\|`. The format allows no line breaks
// in the header, so they become spaces.
std::string escape_cef_header(std::string_view value);
// Extension values: `\` -> `\\`, `=` -> `\=`, line breaks -> `\n` / `\r`.
std::string escape_cef_extension(std::string_view value);

// The event class id is the entry name. Extensions whose source value is
// empty are omitted.
CefLine transpose_cef(const telemetry::HttpTransaction& tx, std::string_view entry_name);

}  // namespace setc::pipeline
