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

#include "setc/telemetry/buffer.hpp"

namespace setc::telemetry {

void TransactionBuffer::append(Capture capture) {
  std::lock_guard lock(mu_);
  items_.push_back(std::move(capture));
}

void TransactionBuffer::append(std::span<const Capture> captures) {
  std::lock_guard lock(mu_);
  items_.insert(items_.end(), captures.begin(), captures.end());
}

std::size_t TransactionBuffer::size() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

std::vector<Capture> TransactionBuffer::snapshot() const {
  std::lock_guard lock(mu_);
  return items_;
}

std::size_t TransactionBuffer::flush(const Deliver& deliver) {
  // Writers may keep appending while the flush is in progress; only the
  // prefix that was handed over is dropped.
  const auto pending = snapshot();
  if (pending.empty()) return 0;
  deliver(pending);
  std::lock_guard lock(mu_);
  items_.erase(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(pending.size()));
  return pending.size();
}

}  // namespace setc::telemetry
