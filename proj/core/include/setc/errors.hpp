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
#include <stdexcept>
#include <string>
#include <vector>

namespace setc {

// Malformed JSON input. offset is the byte position reported by the parser.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Structurally valid JSON that violates the configuration schema.
// path uses the `entries[0].exploit` notation.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class EngineErrorKind { NotFound, Conflict, Timeout, Transport };

const char* to_string(EngineErrorKind kind) noexcept;

class EngineError : public std::runtime_error {
 public:
  EngineError(EngineErrorKind kind, const std::string& diagnostic);
  EngineErrorKind kind() const noexcept { return kind_; }

 private:
  EngineErrorKind kind_;
};

// A fixture or scenario file that is missing or contains an invalid record.
// record is 1-based (line number for NDJSON); 0 means the file as a whole.
class FixtureError : public std::runtime_error {
 public:
  FixtureError(std::string path, std::size_t record, const std::string& what);
  const std::string& path() const noexcept { return path_; }
  std::size_t record() const noexcept { return record_; }

 private:
  std::string path_;
  std::size_t record_;
};

struct SinkFailure {
  std::string sink;
  std::string message;
};

// One or more sinks rejected a delivery. Other sinks were still attempted.
class SinkError : public std::runtime_error {
 public:
  explicit SinkError(std::vector<SinkFailure> failures);
  SinkError(std::string sink, const std::string& message);
  const std::vector<SinkFailure>& failures() const noexcept { return failures_; }

 private:
  std::vector<SinkFailure> failures_;
};

}  // namespace setc
