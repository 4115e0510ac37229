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

#include <memory>
#include <regex>
#include <string>
#include <string_view>

namespace setc {

// A case-sensitive text pattern. Plain strings match as substrings; a
// pattern written as `re:<expr>` is an ECMAScript regular expression
// searched anywhere in the subject.
class Matcher {
 public:
  static constexpr std::string_view kRegexPrefix = "re:";

  // Throws std::invalid_argument when a regex pattern does not compile.
  explicit Matcher(std::string pattern);

  bool matches(std::string_view subject) const;

  const std::string& pattern() const noexcept { return pattern_; }
  bool is_regex() const noexcept { return regex_ != nullptr; }

 private:
  std::string pattern_;
  std::string needle_;
  std::shared_ptr<const std::regex> regex_;
};

}  // namespace setc
