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

#include <chrono>
#include <string>
#include <vector>

#include "setc/engine/types.hpp"

namespace setc::engine {

// The minimal container-engine surface the runner needs. All operations
// either complete or throw EngineError; removing an absent resource is a
// silent no-op. Implementations accept concurrent callers; ordering of
// operations on one container is the caller's responsibility.
class ContainerEngine {
 public:
  virtual ~ContainerEngine() = default;

  virtual NetworkId create_network(const NetworkSpec& spec) = 0;
  virtual ContainerId create_container(const ContainerSpec& spec) = 0;
  virtual void start_container(const ContainerId& id) = 0;

  // Blocks until the container exits or the timeout passes, then reports the
  // observed state. A container still running at the deadline is reported
  // as such, not as an error.
  virtual ContainerStatus wait_container(const ContainerId& id,
                                         std::chrono::milliseconds timeout) = 0;

  virtual std::vector<std::string> stream_logs(const ContainerId& id) = 0;
  virtual void remove_container(const ContainerId& id) = 0;
  virtual void remove_network(const NetworkId& id) = 0;

  // Ids of live networks and containers whose labels include every
  // key/value pair of the filter.
  virtual std::vector<std::string> list_labeled(const Labels& filter) = 0;
};

}  // namespace setc::engine
