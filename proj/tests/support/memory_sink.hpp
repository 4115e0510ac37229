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

#include <mutex>
#include <string>
#include <vector>

#include "setc/pipeline/sinks.hpp"

namespace setc::testing {

// Keeps delivered events in memory. With `fail` set, every delivery is
// rejected.
class MemorySink final : public pipeline::Sink {
 public:
  explicit MemorySink(bool fail = false) : fail_(fail) {}

  std::string name() const override { return "memory"; }

  pipeline::DeliveryReceipt deliver(std::span<const pipeline::NormalizedEvent> events) override {
    std::lock_guard lock(mu_);
    if (fail_) return {name(), false, 0, "rejected"};
    events_.insert(events_.end(), events.begin(), events.end());
    return {name(), true, events.size(), {}};
  }

  std::vector<pipeline::NormalizedEvent> events() const {
    std::lock_guard lock(mu_);
    return events_;
  }

 private:
  bool fail_;
  mutable std::mutex mu_;
  std::vector<pipeline::NormalizedEvent> events_;
};

}  // namespace setc::testing
