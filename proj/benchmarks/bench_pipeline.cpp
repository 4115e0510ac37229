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

#include <benchmark/benchmark.h>

#include <random>

#include "setc/analysis/signatures.hpp"
#include "setc/pipeline/cef.hpp"
#include "setc/pipeline/cim.hpp"
#include "setc/pipeline/formats.hpp"
#include "setc/pipeline/ocsf.hpp"

namespace {

using namespace setc;

telemetry::HttpTransaction sample_tx(std::size_t i) {
  telemetry::HttpTransaction tx;
  tx.timestamp = 1690410131.023336 + static_cast<double>(i);
  tx.src = "172.29.0.4";
  tx.dest = "172.29.0.3";
  tx.http_method = i % 3 ? "GET" : "POST";
  tx.uri_path = "/cgi-bin/.2e/.2e/.2e/bin/sh";
  tx.url = tx.uri_path + "?id=" + std::to_string(i) + "&q=a|b=c";
  tx.status = 200;
  tx.bytes_in = 429;
  tx.bytes_out = 1024;
  tx.http_content_type = {"text/html"};
  tx.http_user_agent = "Mozilla/5.0 (X11; Linux x86_64) Gecko/20100101 Firefox/115.0";
  tx.host_label = "target_CVE-2021-42013";
  return tx;
}

void BM_TransposeCim(benchmark::State& state) {
  const auto tx = sample_tx(1);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::to_json(pipeline::transpose_cim(tx)).dump());
}
BENCHMARK(BM_TransposeCim);

void BM_TransposeOcsf(benchmark::State& state) {
  const auto tx = sample_tx(1);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::to_json(pipeline::transpose_ocsf(tx)).dump());
}
BENCHMARK(BM_TransposeOcsf);

void BM_TransposeCef(benchmark::State& state) {
  const auto tx = sample_tx(1);
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::transpose_cef(tx, "CVE-2021-42013").render());
}
BENCHMARK(BM_TransposeCef);

void BM_MatchSignatures(benchmark::State& state) {
  analysis::EntryEvents entry{"CVE-2021-42013", {}};
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    entry.events.push_back(pipeline::transpose_cim(sample_tx(static_cast<std::size_t>(i))));
  }
  const std::vector<analysis::EntryEvents> entries{entry};
  const std::vector<analysis::SignatureRule> rules{
      {"CVE-2021-42013", {"/bin/sh", ".2e/.2e/", R"(re:id=\d+&q=)"}}};
  for (auto _ : state) benchmark::DoNotOptimize(analysis::match_signatures(entries, rules));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MatchSignatures)->Arg(16)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
