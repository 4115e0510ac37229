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

#include "setc/errors.hpp"

#include <sstream>

namespace setc {

namespace {

std::string describe(const std::vector<SinkFailure>& failures) {
  std::ostringstream out;
  out << "sink delivery failed";
  for (const auto& f : failures) {
    out << "; " << f.sink << ": " << f.message;
  }
  return out.str();
}

}  // namespace

ParseError::ParseError(std::size_t offset, const std::string& what)
    : std::runtime_error("parse error at byte " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

SchemaError::SchemaError(std::string path, const std::string& what)
    : std::runtime_error((path.empty() ? std::string("<root>") : path) + ": " + what),
      path_(std::move(path)) {}

const char* to_string(EngineErrorKind kind) noexcept {
  switch (kind) {
    case EngineErrorKind::NotFound:
      return "not found";
    case EngineErrorKind::Conflict:
      return "conflict";
    case EngineErrorKind::Timeout:
      return "timeout";
    case EngineErrorKind::Transport:
      return "transport";
  }
  return "unknown";
}

EngineError::EngineError(EngineErrorKind kind, const std::string& diagnostic)
    : std::runtime_error(std::string("engine ") + to_string(kind) + ": " + diagnostic), kind_(kind) {}

FixtureError::FixtureError(std::string path, std::size_t record, const std::string& what)
    : std::runtime_error(path + (record ? ":" + std::to_string(record) : std::string()) + ": " + what),
      path_(std::move(path)),
      record_(record) {}

SinkError::SinkError(std::vector<SinkFailure> failures)
    : std::runtime_error(describe(failures)), failures_(std::move(failures)) {}

SinkError::SinkError(std::string sink, const std::string& message)
    : SinkError(std::vector<SinkFailure>{{std::move(sink), message}}) {}

}  // namespace setc
