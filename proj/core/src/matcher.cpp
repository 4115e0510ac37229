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

#include "setc/matcher.hpp"

#include <stdexcept>

namespace setc {

Matcher::Matcher(std::string pattern) : pattern_(std::move(pattern)) {
  if (std::string_view(pattern_).starts_with(kRegexPrefix)) {
    try {
      regex_ = std::make_shared<const std::regex>(pattern_.substr(kRegexPrefix.size()),
                                                   std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw std::invalid_argument("invalid regex pattern '" + pattern_ + "': " + e.what());
    }
  } else {
    needle_ = pattern_;
  }
}

bool Matcher::matches(std::string_view subject) const {
  if (regex_) {
    return std::regex_search(subject.begin(), subject.end(), *regex_);
  }
  return subject.find(needle_) != std::string_view::npos;
}

}  // namespace setc
