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
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "setc/config/config.hpp"
#include "setc/pipeline/formats.hpp"

namespace setc::pipeline {

struct DeliveryReceipt {
  std::string sink;
  bool ok = true;
  std::size_t delivered = 0;
  std::string error;
};

class Sink {
 public:
  virtual ~Sink() = default;
  virtual std::string name() const = 0;
  // Never throws for delivery problems; failures are reported in the receipt.
  virtual DeliveryReceipt deliver(std::span<const NormalizedEvent> events) = 0;
};

// Appends to `<root>/<session>/<entry>.<format>.ndjson`, one line per event.
class FileNdjsonSink final : public Sink {
 public:
  explicit FileNdjsonSink(std::filesystem::path root);

  std::string name() const override;
  DeliveryReceipt deliver(std::span<const NormalizedEvent> events) override;

  static std::filesystem::path file_for(const std::filesystem::path& root, const NormalizedEvent& ev);

 private:
  std::filesystem::path root_;
  std::mutex mu_;
};

struct CollectorEndpoint {
  // scheme://host[:port]
  std::string origin;
  std::string path;
};

// Throws std::invalid_argument for malformed URLs.
CollectorEndpoint parse_collector_url(const std::string& url);

// Envelope posted for one event, shaped like common SIEM HTTP event
// collector payloads.
nlohmann::ordered_json collector_envelope(const NormalizedEvent& ev);

// POSTs NDJSON batches with an `Authorization: <scheme> <token>` header.
// Non-2xx replies and transport errors are retried with exponential backoff.
class HttpCollectorSink final : public Sink {
 public:
  HttpCollectorSink(config::CollectorSinkConfig cfg, std::string token);

  std::string name() const override;
  DeliveryReceipt deliver(std::span<const NormalizedEvent> events) override;

 private:
  config::CollectorSinkConfig cfg_;
  std::string token_;
  CollectorEndpoint endpoint_;
};

// Offers the events to every sink; a failing sink does not stop the others.
std::vector<DeliveryReceipt> route(std::span<const NormalizedEvent> events,
                                   std::span<const std::shared_ptr<Sink>> sinks);

std::vector<DeliveryReceipt> route(const NormalizedEvent& event,
                                   std::span<const std::shared_ptr<Sink>> sinks);

}  // namespace setc::pipeline
