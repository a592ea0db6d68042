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

#include "vidseek/fusion.hpp"
#include "vidseek/hashing.hpp"

namespace {

using namespace vidseek;

std::vector<RankedHit> random_list(DeterministicRng& rng, std::size_t n) {
  std::vector<RankedHit> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = rng.uniform_int(0, static_cast<std::int64_t>(n) * 2);
    out.push_back({"v" + std::to_string(id / 50), "s" + std::to_string(id), 0.0, 0,
                   HitSource::Embedding});
  }
  renumber(out);
  return out;
}

void BM_RrfFuse(benchmark::State& state) {
  DeterministicRng rng(3);
  std::vector<std::vector<RankedHit>> lists;
  for (int i = 0; i < state.range(1); ++i) {
    lists.push_back(random_list(rng, static_cast<std::size_t>(state.range(0))));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(rrf_fuse(lists, 60));
  }
}
BENCHMARK(BM_RrfFuse)->Args({1000, 2})->Args({1000, 4})->Unit(benchmark::kMicrosecond);

void BM_FilterByVideos(benchmark::State& state) {
  DeterministicRng rng(4);
  const auto hits = random_list(rng, static_cast<std::size_t>(state.range(0)));
  std::set<std::string> allowed;
  for (int v = 0; v < 40; v += 2) allowed.insert("v" + std::to_string(v));
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter_by_videos(hits, allowed));
  }
}
BENCHMARK(BM_FilterByVideos)->Arg(1000)->Unit(benchmark::kMicrosecond);

}  // namespace
