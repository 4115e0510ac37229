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

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "setc/telemetry/transaction.hpp"

namespace setc::pipeline {

struct OcsfEndpoint {
  std::string ip;
  std::optional<int> port;
  std::optional<std::string> hostname;

  bool operator==(const OcsfEndpoint&) const = default;
};

struct OcsfHttpRequest {
  std::string http_method;
  std::string url_string;
  std::string path;
  std::string user_agent;
  std::optional<std::string> referrer;
  std::int64_t length = 0;

  bool operator==(const OcsfHttpRequest&) const = default;
};

struct OcsfHttpResponse {
  int code = 0;
  std::int64_t length = 0;
  std::optional<std::string> content_type;

  bool operator==(const OcsfHttpResponse&) const = default;
};

struct OcsfMetadata {
  std::string version;
  std::string product_name;
  std::string vendor_name;
  std::string product_version;

  bool operator==(const OcsfMetadata&) const = default;
};

// OCSF HTTP Activity event at the pinned schema version.
struct OcsfHttpEvent {
  int class_uid = 0;
  std::string class_name;
  int category_uid = 0;
  std::string category_name;
  int activity_id = 0;
  std::string activity_name;
  std::int64_t type_uid = 0;
  std::string type_name;
  int severity_id = 0;
  std::string severity;
  // Milliseconds since the epoch.
  std::int64_t time = 0;
  OcsfEndpoint src_endpoint;
  OcsfEndpoint dst_endpoint;
  OcsfHttpRequest http_request;
  OcsfHttpResponse http_response;
  OcsfMetadata metadata;
  // Source fields the class has no attribute for.
  nlohmann::ordered_json unmapped = nlohmann::ordered_json::object();

  bool operator==(const OcsfHttpEvent&) const = default;
};

// HTTP Activity activity_id for a request method; 99 (Other) for anything
// outside the enumerated set, including non-standard methods.
int ocsf_activity_id(std::string_view http_method);
std::string ocsf_activity_name(int activity_id);

OcsfHttpEvent transpose_ocsf(const telemetry::HttpTransaction& tx);

OcsfHttpEvent transpose_ocsf_extended(const telemetry::HttpTransaction& tx,
                                      const std::optional<std::string>& request_body);

nlohmann::ordered_json to_json(const OcsfHttpEvent& event);

}  // namespace setc::pipeline
