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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vidseek/fusion.hpp"
#include "vidseek/ranked_hit.hpp"

namespace vidseek {

struct TimeSpan {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
};

/// Resolves a segment id to its time span; nullopt drops the hit.
using SpanLookup =
    std::function<std::optional<TimeSpan>(const std::string& segment_id)>;

struct ChainLink {
  std::string segment_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  double score = 0.0;
};

struct TemporalMatch {
  std::string video_id;
  std::vector<ChainLink> chain;  // one link per stage, in stage order
  double score = 0.0;            // sum of link scores in stage order
};

/// Per video, finds the highest-scoring chain picking one hit per stage with
/// strictly increasing start times and next.start - prev.end <= window_ms.
/// Videos without a valid chain are dropped. Output is ordered by score desc,
/// then videoId asc. Equal-score alternatives resolve to the earliest
/// (startMs, segmentId) candidate at each stage.
std::vector<TemporalMatch> temporal_merge(
    std::span<const std::vector<RankedHit>> stage_results,
    const TemporalParams& params, const SpanLookup& lookup);

}  // namespace vidseek
