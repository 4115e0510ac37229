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

#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <fstream>
#include <stop_token>
#include <thread>

#include <nlohmann/json.hpp>

#include "setc/errors.hpp"
#include "setc/telemetry/buffer.hpp"
#include "setc/telemetry/recording_proxy.hpp"
#include "setc/telemetry/transaction.hpp"
#include "support/paths.hpp"
#include "support/raw_http_server.hpp"

namespace {

using namespace setc;
using namespace setc::telemetry;
using setc::testing::RawHttpServer;

// Sends `request` to 127.0.0.1:port and reads until the peer closes.
std::string exchange(int port, const std::string& request) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    return {};
  }
  timeval tv{5, 0};
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  ::send(fd, request.data(), request.size(), MSG_NOSIGNAL);
  std::string out;
  char buf[4096];
  for (;;) {
    const auto n = ::recv(fd, buf, sizeof buf, 0);
    if (n <= 0) break;
    out.append(buf, static_cast<std::size_t>(n));
  }
  ::close(fd);
  return out;
}

struct ProxyFixture {
  explicit ProxyFixture(int upstream_port, std::optional<std::filesystem::path> spool = std::nullopt) {
    ProxyOptions opts;
    opts.listen_host = "127.0.0.1";
    opts.listen_port = 0;
    opts.upstream_host = "127.0.0.1";
    opts.upstream_port = upstream_port;
    opts.host_label = "target_CVE-X";
    opts.spool_dir = std::move(spool);
    opts.io_timeout = std::chrono::milliseconds(2000);
    proxy = std::make_unique<RecordingProxy>(opts, [this](const Capture& c) {
      std::lock_guard lock(mu);
      captures.push_back(c);
    });
    proxy->start();
  }
  std::vector<Capture> got() {
    std::lock_guard lock(mu);
    return captures;
  }
  std::mutex mu;
  std::vector<Capture> captures;
  std::unique_ptr<RecordingProxy> proxy;
};

HttpTransaction valid_tx() {
  HttpTransaction tx;
  tx.timestamp = 1690410131.023336;
  tx.src = "172.29.0.4";
  tx.dest = "172.29.0.3";
  tx.http_method = "GET";
  tx.uri_path = "/";
  tx.url = "/?a=1";
  tx.status = 200;
  tx.bytes_in = 10;
  tx.bytes_out = 20;
  tx.http_content_type = {"text/html"};
  tx.host_label = "target";
  return tx;
}

TEST(RequestHead, ParsesVerbatim) {
  auto h = parse_request_head("tkHe /cgi-bin/.2e/.2e/bin/sh HTTP/1.1\r\nHost: x\r\nuser-agent: UA\r\nX: 1\r\nX: 2\r\n\r\n");
  EXPECT_EQ(h.method, "tkHe");
  EXPECT_EQ(h.target, "/cgi-bin/.2e/.2e/bin/sh");
  EXPECT_EQ(h.version, "HTTP/1.1");
  EXPECT_EQ(h.header("User-Agent"), "UA");
  EXPECT_EQ(h.headers_named("x"), (std::vector<std::string>{"1", "2"}));
  EXPECT_FALSE(h.header("Referer").has_value());

  auto bad = parse_request_head("GARBAGE\r\nno-colon-line\r\n\r\n");
  EXPECT_EQ(bad.method, "GARBAGE");
  EXPECT_TRUE(bad.target.empty());
}

TEST(RequestHead, TargetPath) {
  EXPECT_EQ(target_path("/a/b?c=d"), "/a/b");
  EXPECT_EQ(target_path("http://host:8080/x/y?z"), "/x/y");
  EXPECT_EQ(target_path("http://host"), "/");
  EXPECT_EQ(target_path("*"), "*");
}

TEST(Transaction, ValidateAndJsonRoundTrip) {
  auto tx = valid_tx();
  EXPECT_FALSE(validate(tx).has_value());
  Capture c{tx, std::string("body")};
  auto back = capture_from_json(nlohmann::json::parse(to_ndjson_line(c)));
  EXPECT_EQ(back, c);

  auto bad = tx;
  bad.bytes_in = -1;
  EXPECT_TRUE(validate(bad).has_value());
  bad = tx;
  bad.dest_port = 0;
  EXPECT_TRUE(validate(bad).has_value());

  auto j = to_json(c);
  j["extra"] = 1;
  EXPECT_THROW(capture_from_json(j), std::invalid_argument);
}

TEST(Transaction, ProxyLogParsingSkipsNoise) {
  Capture c{valid_tx(), std::nullopt};
  std::vector<std::string> lines{"proxy listening on 0.0.0.0:8080", to_ndjson_line(c), "", "[1, 2]"};
  auto parsed = parse_proxy_log(lines);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0], c);
  EXPECT_THROW(parse_proxy_log({R"({"status": "x"})"}), std::invalid_argument);
}

TEST(Transaction, FixtureErrorsNameTheLine) {
  setc::testing::TempDir dir;
  const auto path = dir.path() / "f.ndjson";
  {
    std::ofstream out(path);
    out << to_ndjson_line({valid_tx(), std::nullopt}) << "\n\n{not json}\n";
  }
  try {
    load_captures(path);
    FAIL();
  } catch (const FixtureError& e) {
    EXPECT_EQ(e.record(), 3u);
    EXPECT_EQ(e.path(), path.string());
  }
  EXPECT_THROW(load_captures(dir.path() / "missing.ndjson"), FixtureError);
}

TEST(Transaction, ShippedFixtures) {
  auto traversal = replay_fixture(setc::testing::data_dir() / "fixtures" / "apache-cgi-traversal.ndjson");
  ASSERT_EQ(traversal.size(), 1u);
  EXPECT_EQ(traversal[0].http_method, "tkHe");
  EXPECT_EQ(traversal[0].bytes_in, 429);
  std::size_t total = 0;
  for (const auto& f : std::filesystem::directory_iterator(setc::testing::data_dir() / "fixtures" / "cve-suite")) {
    total += load_captures(f.path()).size();
  }
  EXPECT_EQ(total, 16u);
}

TEST(Buffer, FlushKeepsCapturesOnFailure) {
  TransactionBuffer buf;
  Capture c{valid_tx(), std::nullopt};
  buf.append(c);
  std::vector<Capture> more{c, c};
  buf.append(more);
  EXPECT_EQ(buf.size(), 3u);
  EXPECT_THROW(buf.flush([](std::span<const Capture>) { throw std::runtime_error("sink down"); }),
               std::runtime_error);
  EXPECT_EQ(buf.size(), 3u);
  std::size_t seen = 0;
  EXPECT_EQ(buf.flush([&](std::span<const Capture> s) { seen = s.size(); }), 3u);
  EXPECT_EQ(seen, 3u);
  EXPECT_EQ(buf.size(), 0u);
  EXPECT_EQ(buf.flush([](std::span<const Capture>) {}), 0u);
}

TEST(Buffer, ConcurrentAppends) {
  TransactionBuffer buf;
  std::vector<std::thread> ts;
  for (int t = 0; t < 4; ++t) {
    ts.emplace_back([&] {
      for (int i = 0; i < 250; ++i) buf.append(Capture{valid_tx(), std::nullopt});
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_EQ(buf.size(), 1000u);
}

TEST(RecordingProxy, RecordsNonStandardMethodAndWireBytes) {
  RawHttpServer upstream([](const std::string&) { return RawHttpServer::response(200, "9Xk2mRt\n", "text/plain", true); });
  setc::testing::TempDir spool;
  ProxyFixture fx(upstream.port(), spool.path());
  const std::string body = "echo Content-Type: text/plain; echo; echo 9Xk2mRt";
  const std::string head = "tkHe /cgi-bin/.2e/.2e/bin/sh?x=1 HTTP/1.1\r\nHost: target\r\nUser-Agent: Mozilla/5.0\r\n"
                           "Content-Length: " + std::to_string(body.size()) + "\r\nConnection: close\r\n\r\n";
  auto reply = exchange(fx.proxy->port(), head + body);
  EXPECT_NE(reply.find("9Xk2mRt"), std::string::npos);

  const auto got = fx.got();
  ASSERT_EQ(got.size(), 1u);
  const auto& c = got[0];
  const auto& tx = c.transaction;
  EXPECT_EQ(tx.http_method, "tkHe");
  EXPECT_EQ(tx.url, "/cgi-bin/.2e/.2e/bin/sh?x=1");
  EXPECT_EQ(tx.uri_path, "/cgi-bin/.2e/.2e/bin/sh");
  EXPECT_EQ(tx.status, 200);
  EXPECT_EQ(tx.bytes_in, static_cast<std::int64_t>(head.size() + body.size()));
  EXPECT_EQ(tx.bytes_out, static_cast<std::int64_t>(reply.size()));
  EXPECT_EQ(tx.http_content_type, std::vector<std::string>{"text/plain"});
  EXPECT_EQ(tx.http_user_agent, "Mozilla/5.0");
  EXPECT_EQ(tx.http_referrer, "-");
  EXPECT_EQ(tx.src, "127.0.0.1");
  EXPECT_EQ(tx.dest, "127.0.0.1");
  EXPECT_EQ(tx.dest_port, upstream.port());
  EXPECT_EQ(tx.host_label, "target_CVE-X");
  EXPECT_EQ(c.request_body, body);
  EXPECT_FALSE(validate(tx).has_value());

  // The upstream saw the request unchanged.
  ASSERT_EQ(upstream.requests().size(), 1u);
  EXPECT_EQ(upstream.requests()[0], head + body);

  auto spooled = load_captures(spool.path() / "captures.ndjson");
  ASSERT_EQ(spooled.size(), 1u);
  EXPECT_EQ(spooled[0], c);
  fx.proxy->stop();
}

TEST(RecordingProxy, KeepAliveAndChunkedBodies) {
  RawHttpServer upstream([](const std::string& raw) {
    return RawHttpServer::response(raw.rfind("POST", 0) == 0 ? 201 : 404, "ok", "application/json");
  });
  ProxyFixture fx(upstream.port());
  const std::string first = "GET /a HTTP/1.1\r\nHost: t\r\nReferer: http://evil.example/x\r\n\r\n";
  const std::string second =
      "POST /b HTTP/1.1\r\nHost: t\r\nTransfer-Encoding: chunked\r\nConnection: close\r\n\r\n"
      "4\r\nabcd\r\n3\r\nefg\r\n0\r\n\r\n";
  exchange(fx.proxy->port(), first + second);
  auto got = fx.got();
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].transaction.status, 404);
  EXPECT_EQ(got[0].transaction.http_referrer, "http://evil.example/x");
  EXPECT_FALSE(got[0].request_body.has_value());
  EXPECT_EQ(got[1].transaction.status, 201);
  EXPECT_EQ(got[1].request_body, "abcdefg");
  EXPECT_EQ(got[1].transaction.bytes_in, static_cast<std::int64_t>(second.size()));
  EXPECT_EQ(fx.proxy->transactions(), 2u);
}

TEST(RecordingProxy, UnreachableUpstreamGives502) {
  ProxyFixture fx(setc::testing::unused_port());
  auto reply = exchange(fx.proxy->port(), "GET / HTTP/1.1\r\nHost: t\r\n\r\n");
  EXPECT_NE(reply.find("502"), std::string::npos);
  const auto got = fx.got();
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].transaction.status, 502);
  EXPECT_EQ(got[0].transaction.bytes_out, 0);
}

TEST(RecordingProxy, ServeUntilStopped) {
  RawHttpServer upstream([](const std::string&) { return RawHttpServer::response(200, "x", "text/plain", true); });
  ProxyOptions opts;
  opts.listen_host = "127.0.0.1";
  opts.listen_port = 0;
  opts.upstream_host = "127.0.0.1";
  opts.upstream_port = upstream.port();
  std::stop_source stop;
  std::thread t([&] { serve_recording_proxy(opts, {}, stop.get_token()); });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  stop.request_stop();
  t.join();
  SUCCEED();
}

}  // namespace
