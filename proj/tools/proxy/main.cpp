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

// setc-proxy: recording reverse proxy run as the telemetry sidecar. Every
// captured transaction is printed to stdout as one NDJSON line; the runner
// collects them from the container log stream.

#include <csignal>
#include <iostream>
#include <mutex>
#include <string>

#include <CLI11.hpp>

#include "setc/telemetry/recording_proxy.hpp"

namespace {

std::pair<std::string, int> split_host_port(const std::string& text, const char* what) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError(what, "expected host:port, got " + text);
  auto host = text.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  return {host, std::stoi(text.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recording HTTP reverse proxy", "setc-proxy"};
  std::string listen = "0.0.0.0:8080";
  std::string upstream;
  std::string host_label;
  std::string spool;
  int timeout_s = 30;
  app.add_option("--listen", listen, "Listen address host:port");
  app.add_option("--upstream", upstream, "Upstream address host:port")->required();
  app.add_option("--host-label", host_label, "Recorded as host_label (default: upstream host)");
  app.add_option("--spool", spool, "Directory for the raw capture spool");
  app.add_option("--io-timeout", timeout_s, "Socket timeout in seconds");
  CLI11_PARSE(app, argc, argv);

  setc::telemetry::ProxyOptions options;
  try {
    std::tie(options.listen_host, options.listen_port) = split_host_port(listen, "--listen");
    std::tie(options.upstream_host, options.upstream_port) = split_host_port(upstream, "--upstream");
  } catch (const std::exception& e) {
    std::cerr << "setc-proxy: " << e.what() << "\n";
    return 2;
  }
  options.host_label = host_label;
  if (!spool.empty()) options.spool_dir = spool;
  options.io_timeout = std::chrono::seconds(timeout_s);

  // Block termination signals before any thread starts so sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::mutex out_mu;
  setc::telemetry::RecordingProxy proxy(options, [&](const setc::telemetry::Capture& c) {
    std::lock_guard lock(out_mu);
    std::cout << setc::telemetry::to_ndjson_line(c) << std::endl;
  });
  try {
    proxy.start();
  } catch (const std::exception& e) {
    std::cerr << "setc-proxy: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "setc-proxy: listening on " << options.listen_host << ":" << proxy.port() << ", upstream "
            << options.upstream_host << ":" << options.upstream_port << "\n";

  int sig = 0;
  sigwait(&signals, &sig);
  proxy.stop();
  std::cerr << "setc-proxy: " << proxy.transactions() << " transactions recorded\n";
  return 0;
}
