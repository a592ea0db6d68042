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

#include "vidseek/temporal_merge.hpp"

#include <gtest/gtest.h>

#include <map>

#include "checks.hpp"
#include "vidseek/error.hpp"

namespace vidseek {
namespace {

using Spans = std::map<std::string, TimeSpan>;

RankedHit hit(std::string video, std::string segment, double score) {
  return {std::move(video), std::move(segment), score, 0, HitSource::Embedding};
}

std::vector<TemporalMatch> run(std::vector<std::vector<RankedHit>> stages, const Spans& spans,
                               std::int64_t window = 30'000) {
  for (auto& s : stages) renumber(s);
  return temporal_merge(std::span<const std::vector<RankedHit>>(stages), {window, 1000},
                        [&](const std::string& id) -> std::optional<TimeSpan> {
                          const auto it = spans.find(id);
                          if (it == spans.end()) return std::nullopt;
                          return it->second;
                        });
}

const Spans kTwo = {{"a", {0, 1000}}, {"b", {2000, 3000}}};

TEST(TemporalMerge, InOrderWithinWindowMatches) {
  const auto out = run({{hit("v", "a", 0.5)}, {hit("v", "b", 0.25)}}, kTwo);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].video_id, "v");
  EXPECT_EQ(out[0].score, 0.75);
  ASSERT_EQ(out[0].chain.size(), 2u);
  EXPECT_EQ(out[0].chain[0].segment_id, "a");
  EXPECT_EQ(out[0].chain[1].segment_id, "b");
  EXPECT_EQ(out[0].chain[1].start_ms, 2000);
}

TEST(TemporalMerge, ReversedOrderHasNoMatch) {
  EXPECT_TRUE(run({{hit("v", "b", 0.5)}, {hit("v", "a", 0.5)}}, kTwo).empty());
}

TEST(TemporalMerge, GapBeyondWindowHasNoMatch) {
  EXPECT_TRUE(run({{hit("v", "a", 0.5)}, {hit("v", "b", 0.5)}}, kTwo, 999).empty());
  EXPECT_EQ(run({{hit("v", "a", 0.5)}, {hit("v", "b", 0.5)}}, kTwo, 1000).size(), 1u);
}

TEST(TemporalMerge, EqualStartIsNotStrictlyLater) {
  const Spans spans = {{"a", {0, 1000}}, {"b", {0, 500}}};
  EXPECT_TRUE(run({{hit("v", "a", 1)}, {hit("v", "b", 1)}}, spans).empty());
}

TEST(TemporalMerge, SameSegmentCannotSatisfyTwoStages) {
  EXPECT_TRUE(run({{hit("v", "a", 1)}, {hit("v", "a", 1)}}, kTwo).empty());
}

TEST(TemporalMerge, DifferentVideosNeverChain) {
  const Spans spans = {{"a", {0, 1000}}, {"b", {2000, 3000}}};
  EXPECT_TRUE(run({{hit("v1", "a", 1)}, {hit("v2", "b", 1)}}, spans).empty());
}

TEST(TemporalMerge, BestChainPerVideoAndOrdering) {
  const Spans spans = {{"a1", {0, 1000}},   {"a2", {5000, 6000}}, {"a3", {9000, 9500}},
                       {"b1", {0, 1000}},   {"b2", {3000, 4000}}};
  const auto out = run({{hit("va", "a1", 0.25), hit("va", "a2", 0.75), hit("vb", "b1", 0.5)},
                        {hit("va", "a3", 0.25), hit("vb", "b2", 0.75)}},
                       spans);
  ASSERT_EQ(out.size(), 2u);
  // va: a2->a3 = 1.0; vb: b1->b2 = 1.25.
  EXPECT_EQ(out[0].video_id, "vb");
  EXPECT_EQ(out[0].score, 1.25);
  EXPECT_EQ(out[1].video_id, "va");
  EXPECT_EQ(out[1].score, 1.0);
  EXPECT_EQ(out[1].chain[0].segment_id, "a2");
}

TEST(TemporalMerge, EqualScoresOrderByVideoId) {
  const Spans spans = {{"x1", {0, 10}}, {"x2", {20, 30}}, {"y1", {0, 10}}, {"y2", {20, 30}}};
  const auto out = run({{hit("vy", "y1", 0.5), hit("vx", "x1", 0.5)},
                        {hit("vy", "y2", 0.5), hit("vx", "x2", 0.5)}},
                       spans);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].video_id, "vx");
  EXPECT_EQ(out[1].video_id, "vy");
}

TEST(TemporalMerge, TiedChainsPickEarliestPredecessor) {
  // Two first-stage candidates lead to the same total; the earlier one wins,
  // independent of the order hits arrive in.
  const Spans spans = {{"p", {0, 100}}, {"q", {200, 300}}, {"r", {400, 500}}};
  for (bool swapped : {false, true}) {
    std::vector<RankedHit> first = {hit("v", "p", 0.5), hit("v", "q", 0.5)};
    if (swapped) std::swap(first[0], first[1]);
    const auto out = run({first, {hit("v", "r", 0.25)}}, spans);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].chain[0].segment_id, "p");
    EXPECT_EQ(out[0].score, 0.75);
  }
}

TEST(TemporalMerge, ThreeStagesUseWindowPerStep) {
  const Spans spans = {{"a", {0, 100}}, {"b", {1100, 1200}}, {"c", {2200, 2300}}};
  EXPECT_EQ(run({{hit("v", "a", 1)}, {hit("v", "b", 1)}, {hit("v", "c", 1)}}, spans, 1000).size(),
            1u);
  EXPECT_TRUE(run({{hit("v", "a", 1)}, {hit("v", "b", 1)}, {hit("v", "c", 1)}}, spans, 999)
                  .empty());
}

TEST(TemporalMerge, UnknownSegmentIsSkipped) {
  const auto out = run({{hit("v", "ghost", 5), hit("v", "a", 0.5)}, {hit("v", "b", 0.5)}}, kTwo);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].score, 1.0);
}

TEST(TemporalMerge, EmptyStageGivesNoMatches) {
  EXPECT_TRUE(run({{hit("v", "a", 0.5)}, {}}, kTwo).empty());
}

TEST(TemporalMerge, ParamsValidated) {
  EXPECT_THROW(validate(TemporalParams{0, 10}), Error);
  EXPECT_THROW(validate(TemporalParams{100, 0}), Error);
  EXPECT_NO_THROW(validate(TemporalParams{1, 1}));
}

TEST(TemporalMerge, RandomInstancesMatchExhaustiveSearch) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto mismatch = check::temporal_instance(seed);
    ASSERT_FALSE(mismatch) << *mismatch;
  }
}

}  // namespace
}  // namespace vidseek
