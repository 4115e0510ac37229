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
#include <string_view>

namespace setc {

// Standard log formats the pipeline can emit.
enum class FormatId { CimHttp, OcsfHttp, Cef };

std::string_view to_string(FormatId id) noexcept;
std::optional<FormatId> parse_format_id(std::string_view text) noexcept;

}  // namespace setc
