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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vidseek {

enum class HitSource { Embedding, Metadata };

std::string_view to_string(HitSource s) noexcept;

/// Element of every ranked list the engine produces or merges.
struct RankedHit {
  std::string video_id;
  std::string segment_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
  HitSource source = HitSource::Embedding;

  friend bool operator==(const RankedHit&, const RankedHit&) = default;
};

/// Total order shared by all result lists: score desc, videoId asc,
/// segmentId asc.
inline bool ranks_before(double score_a, std::string_view video_a,
                         std::string_view segment_a, double score_b,
                         std::string_view video_b,
                         std::string_view segment_b) noexcept {
  if (score_a != score_b) return score_a > score_b;
  if (video_a != video_b) return video_a < video_b;
  return segment_a < segment_b;
}

inline bool ranks_before(const RankedHit& a, const RankedHit& b) noexcept {
  return ranks_before(a.score, a.video_id, a.segment_id, b.score, b.video_id,
                      b.segment_id);
}

/// Assigns ranks 1..n in list order.
inline void renumber(std::vector<RankedHit>& hits) noexcept {
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = i + 1;
}

}  // namespace vidseek
