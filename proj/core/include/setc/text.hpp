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
#include <string>
#include <string_view>

namespace setc::text {

// Number of characters in a UTF-8 string. Bytes that do not start a valid
// sequence count as one character each.
std::size_t char_length(std::string_view utf8) noexcept;

std::string to_lower(std::string_view s);

bool iequals(std::string_view a, std::string_view b) noexcept;

std::string_view trim(std::string_view s) noexcept;

// Random lowercase hex identifier of the given length.
std::string random_hex(std::size_t length);

}  // namespace setc::text
