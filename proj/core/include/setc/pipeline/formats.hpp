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

#include <nlohmann/json.hpp>

#include "setc/format_id.hpp"
#include "setc/telemetry/transaction.hpp"

namespace setc::pipeline {

// A transposed record plus the routing metadata sinks need.
struct NormalizedEvent {
  FormatId format = FormatId::CimHttp;
  std::string session_id;
  std::string entry_name;
  double timestamp = 0.0;
  std::string host;
  // CIM and OCSF events are JSON objects; a CEF event is the CEF line as a
  // JSON string.
  nlohmann::ordered_json payload;

  // The NDJSON record written by the file sink. CEF lines are wrapped as
  // {"cef": "<line>"} so every output file is NDJSON.
  std::string ndjson() const;
};

struct TransposeOptions {
  // Adds a request body excerpt (CIM post_body_excerpt, OCSF unmapped).
  bool extended = false;
};

NormalizedEvent transpose(const telemetry::Capture& capture, FormatId format,
                          const std::string& session_id, const std::string& entry_name,
                          TransposeOptions options = {});

}  // namespace setc::pipeline
