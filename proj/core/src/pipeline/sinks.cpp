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

#include "setc/pipeline/sinks.hpp"

#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>

#include <httplib.h>

namespace setc::pipeline {

namespace fs = std::filesystem;

FileNdjsonSink::FileNdjsonSink(fs::path root) : root_(std::move(root)) {}

std::string FileNdjsonSink::name() const { return "file:" + root_.string(); }

fs::path FileNdjsonSink::file_for(const fs::path& root, const NormalizedEvent& ev) {
  return root / ev.session_id / (ev.entry_name + "." + std::string(to_string(ev.format)) + ".ndjson");
}

DeliveryReceipt FileNdjsonSink::deliver(std::span<const NormalizedEvent> events) {
  DeliveryReceipt receipt{name(), true, 0, {}};
  std::lock_guard lock(mu_);

  // Group by target file, keeping event order within each file.
  std::map<fs::path, std::string> pending;
  std::vector<fs::path> order;
  for (const auto& ev : events) {
    auto path = file_for(root_, ev);
    auto [it, inserted] = pending.try_emplace(path);
    if (inserted) order.push_back(path);
    it->second += ev.ndjson();
    it->second += '\n';
  }
  for (const auto& path : order) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      receipt.ok = false;
      receipt.error = "cannot create " + path.parent_path().string() + ": " + ec.message();
      return receipt;
    }
    std::ofstream out(path, std::ios::binary | std::ios::app);
    const auto& data = pending[path];
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      receipt.ok = false;
      receipt.error = "write failed for " + path.string();
      return receipt;
    }
  }
  receipt.delivered = events.size();
  return receipt;
}

CollectorEndpoint parse_collector_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("collector URL lacks a scheme: " + url);
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw std::invalid_argument("collector URL must be http or https: " + url);
  }
  const auto host_start = scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  CollectorEndpoint ep;
  ep.origin = url.substr(0, path_start);
  ep.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (ep.origin.size() <= host_start) throw std::invalid_argument("collector URL lacks a host: " + url);
  return ep;
}

nlohmann::ordered_json collector_envelope(const NormalizedEvent& ev) {
  nlohmann::ordered_json j;
  j["time"] = ev.timestamp;
  j["host"] = ev.host;
  j["source"] = "setc";
  j["sourcetype"] = "setc:" + std::string(to_string(ev.format));
  j["fields"] = {{"session_id", ev.session_id}, {"entry", ev.entry_name}};
  j["event"] = ev.payload;
  return j;
}

HttpCollectorSink::HttpCollectorSink(config::CollectorSinkConfig cfg, std::string token)
    : cfg_(std::move(cfg)), token_(std::move(token)), endpoint_(parse_collector_url(cfg_.endpoint)) {}

std::string HttpCollectorSink::name() const { return "collector:" + cfg_.endpoint; }

DeliveryReceipt HttpCollectorSink::deliver(std::span<const NormalizedEvent> events) {
  DeliveryReceipt receipt{name(), true, 0, {}};
  const std::size_t batch = std::max<std::size_t>(cfg_.batch_size, 1);
  httplib::Headers headers{{"Authorization", cfg_.auth_scheme + " " + token_}};

  for (std::size_t start = 0; start < events.size(); start += batch) {
    std::string body;
    const auto end = std::min(events.size(), start + batch);
    for (std::size_t i = start; i < end; ++i) {
      body += collector_envelope(events[i]).dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
      body += '\n';
    }

    std::string last_error;
    bool accepted = false;
    auto backoff = cfg_.retry_backoff;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
      httplib::Client cli(endpoint_.origin);
      cli.set_connection_timeout(5);
      cli.set_read_timeout(10);
      auto res = cli.Post(endpoint_.path, headers, body, "application/x-ndjson");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 200 && res->status < 300) {
        accepted = true;
        break;
      }
      last_error = "HTTP " + std::to_string(res->status);
    }
    if (!accepted) {
      receipt.ok = false;
      receipt.error = last_error + " after " + std::to_string(cfg_.max_retries + 1) + " attempts";
      return receipt;
    }
    receipt.delivered = end;
  }
  return receipt;
}

std::vector<DeliveryReceipt> route(std::span<const NormalizedEvent> events,
                                   std::span<const std::shared_ptr<Sink>> sinks) {
  std::vector<DeliveryReceipt> receipts;
  receipts.reserve(sinks.size());
  for (const auto& sink : sinks) {
    try {
      receipts.push_back(sink->deliver(events));
    } catch (const std::exception& e) {
      receipts.push_back({sink->name(), false, 0, e.what()});
    }
  }
  return receipts;
}

std::vector<DeliveryReceipt> route(const NormalizedEvent& event,
                                   std::span<const std::shared_ptr<Sink>> sinks) {
  return route(std::span<const NormalizedEvent>(&event, 1), sinks);
}

}  // namespace setc::pipeline
