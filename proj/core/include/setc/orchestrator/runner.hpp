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
#include <functional>
#include <string>
#include <vector>

#include "setc/config/config.hpp"
#include "setc/config/plan.hpp"
#include "setc/engine/engine.hpp"
#include "setc/orchestrator/session.hpp"
#include "setc/pipeline/pipeline.hpp"

namespace setc::orchestrator {

// Engine resources owned by one session, in creation order.
struct SessionResources {
  std::vector<engine::NetworkId> networks;
  std::vector<engine::ContainerId> containers;
  // Labels used to sweep resources whose creation outcome is unknown.
  engine::Labels sweep_filter;
};

// Removes containers (newest first) and then networks. Failed removals are
// retried until `timeout` passes; errors are collected, never thrown.
// Removed ids are appended to `ledger.removed` and dropped from `resources`.
std::vector<std::string> teardown(SessionResources& resources, engine::ContainerEngine& engine,
                                  ResourceLedger& ledger, std::chrono::milliseconds timeout);

// Observes every message as it is sent; used by tests and the CLI.
using MessageObserver = std::function<void(const Message&)>;

// Drives one entry through its lifecycle and always tears it down.
SessionRecord run_entry(const config::ResolvedEntryPlan& plan, engine::ContainerEngine& engine,
                        pipeline::Pipeline& pipeline, const MessageObserver& observer = {});

// Runs every entry of the document with at most `runner.parallelism` in
// flight. Records come back in document order.
SessionReport run_document(const config::ConfigDocument& doc, engine::ContainerEngine& engine,
                           pipeline::Pipeline& pipeline,
                           const std::string& session_id = config::generate_session_id(),
                           const MessageObserver& observer = {});

}  // namespace setc::orchestrator
