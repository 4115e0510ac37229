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

#include "setc/text.hpp"

#include <algorithm>
#include <cctype>
#include <random>

namespace setc::text {

std::size_t char_length(std::string_view utf8) noexcept {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < utf8.size()) {
    const auto lead = static_cast<unsigned char>(utf8[i]);
    std::size_t width = 1;
    if (lead >= 0xC2 && lead <= 0xDF) {
      width = 2;
    } else if (lead >= 0xE0 && lead <= 0xEF) {
      width = 3;
    } else if (lead >= 0xF0 && lead <= 0xF4) {
      width = 4;
    }
    if (width > 1) {
      if (i + width > utf8.size()) {
        width = 1;
      } else {
        for (std::size_t k = 1; k < width; ++k) {
          if ((static_cast<unsigned char>(utf8[i + k]) & 0xC0) != 0x80) {
            width = 1;
            break;
          }
        }
      }
    }
    i += width;
    ++count;
  }
  return count;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

std::string_view trim(std::string_view s) noexcept {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  auto begin = std::find_if(s.begin(), s.end(), not_space);
  auto end = std::find_if(s.rbegin(), s.rend(), not_space).base();
  if (begin >= end) {
    return {};
  }
  return s.substr(static_cast<std::size_t>(begin - s.begin()),
                  static_cast<std::size_t>(end - begin));
}

std::string random_hex(std::size_t length) {
  static constexpr char kDigits[] = "0123456789abcdef";
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_int_distribution<int> pick(0, 15);
  std::string out(length, '0');
  for (auto& c : out) {
    c = kDigits[pick(rng)];
  }
  return out;
}

}  // namespace setc::text
