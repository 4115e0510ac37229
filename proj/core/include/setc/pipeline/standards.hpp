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

// Pinned revisions of the external log standards. Changing any value here is
// a versioned output change; the golden tests must be regenerated with it.

#include <string_view>

namespace setc::pipeline::standards {

// Splunk Common Information Model, Web data model (HTTP fields).
inline constexpr std::string_view kCimModel = "Web";
inline constexpr std::string_view kCimAction = "http";

// Open Cybersecurity Schema Framework 1.1.0, HTTP Activity class
// (schema.ocsf.io/1.1.0/classes/http_activity).
inline constexpr std::string_view kOcsfVersion = "1.1.0";
inline constexpr int kOcsfHttpActivityClassUid = 4002;
inline constexpr std::string_view kOcsfHttpActivityClassName = "HTTP Activity";
inline constexpr int kOcsfNetworkActivityCategoryUid = 4;
inline constexpr std::string_view kOcsfNetworkActivityCategoryName = "Network Activity";
inline constexpr int kOcsfSeverityInformational = 1;

// ArcSight Common Event Format, header version 0 (CEF implementation
// standard, revision 25).
inline constexpr int kCefVersion = 0;
inline constexpr std::string_view kCefVendor = "SETC";
inline constexpr std::string_view kCefProduct = "setc";
inline constexpr std::string_view kCefName = "http";
inline constexpr int kCefDefaultSeverity = 3;

}  // namespace setc::pipeline::standards
