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
#include <functional>
#include <mutex>
#include <span>
#include <vector>

#include "setc/telemetry/transaction.hpp"

namespace setc::telemetry {

// Append-only queue of captures. Any number of writers, one flusher.
class TransactionBuffer {
 public:
  using Deliver = std::function<void(std::span<const Capture>)>;

  void append(Capture capture);
  void append(std::span<const Capture> captures);

  std::size_t size() const;
  std::vector<Capture> snapshot() const;

  // Hands everything buffered so far to `deliver` and drops it once deliver
  // returns. If deliver throws, the captures stay buffered and the exception
  // propagates. Returns the number of captures delivered.
  std::size_t flush(const Deliver& deliver);

 private:
  mutable std::mutex mu_;
  std::vector<Capture> items_;
};

}  // namespace setc::telemetry
