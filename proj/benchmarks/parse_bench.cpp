// Copyright 2026 The vidseek Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "vidseek/query_language.hpp"

namespace {

using namespace vidseek;

void BM_Parse(benchmark::State& state) {
  const std::string input =
      "bride on beach -o person -c \"wedding dress\" < people dancing -e party > sunset";
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_query(input));
  }
}
BENCHMARK(BM_Parse);

void BM_RenderRoundTrip(benchmark::State& state) {
  const auto ast = parse_query("a b c -t \"happy birthday\" < d -m scalpel < e");
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_query(render_query(ast)));
  }
}
BENCHMARK(BM_RenderRoundTrip);

}  // namespace
