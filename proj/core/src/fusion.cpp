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

#include "vidseek/fusion.hpp"

#include <unordered_map>

namespace vidseek {

std::string_view to_string(HitSource s) noexcept {
  return s == HitSource::Embedding ? "embedding" : "metadata";
}

std::string_view to_string(MergeStrategy s) noexcept {
  switch (s) {
    case MergeStrategy::FilterByVideos: return "filterByVideos";
    case MergeStrategy::RrfFuse: return "rrfFuse";
    case MergeStrategy::EmbeddingOnly: return "embeddingOnly";
    case MergeStrategy::MetadataOnly: return "metadataOnly";
  }
  return "filterByVideos";
}

std::optional<MergeStrategy> merge_strategy_from_name(
    std::string_view name) noexcept {
  for (auto s : {MergeStrategy::FilterByVideos, MergeStrategy::RrfFuse,
                 MergeStrategy::EmbeddingOnly, MergeStrategy::MetadataOnly}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void validate(const MergePolicy& policy) {
  if (policy.k_const < 1) {
    throw Error(Errc::InvalidRequest, "rrf kConst must be at least 1");
  }
}

void validate(const TemporalParams& params) {
  if (params.window_ms <= 0) {
    throw Error(Errc::InvalidRequest, "temporal windowMs must be positive");
  }
  if (params.per_stage_depth == 0) {
    throw Error(Errc::InvalidRequest, "perStageDepth must be at least 1");
  }
}

std::vector<RankedHit> filter_by_videos(std::span<const RankedHit> hits,
                                        const std::set<std::string>& allowed) {
  std::vector<RankedHit> out;
  for (const auto& h : hits) {
    if (allowed.count(h.video_id) != 0) out.push_back(h);
  }
  renumber(out);
  return out;
}

std::vector<RankedHit> rrf_fuse(std::span<const std::vector<RankedHit>> lists,
                                int k_const) {
  struct Accumulator {
    std::string_view video_id;
    std::vector<std::size_t> ranks;
    bool from_embedding = false;
  };
  std::unordered_map<std::string_view, Accumulator> table;
  for (const auto& list : lists) {
    std::unordered_map<std::string_view, std::size_t> best_in_list;
    for (const auto& h : list) {
      auto [it, inserted] = best_in_list.emplace(h.segment_id, h.rank);
      if (!inserted) it->second = std::min(it->second, h.rank);
      auto& acc = table[h.segment_id];
      acc.video_id = h.video_id;
      acc.from_embedding |= h.source == HitSource::Embedding;
    }
    for (const auto& [segment, rank] : best_in_list) {
      table[segment].ranks.push_back(rank);
    }
  }

  std::vector<RankedHit> fused;
  fused.reserve(table.size());
  for (auto& [segment, acc] : table) {
    std::sort(acc.ranks.begin(), acc.ranks.end());
    double score = 0.0;
    for (std::size_t r : acc.ranks) {
      score += 1.0 / (static_cast<double>(k_const) + static_cast<double>(r));
    }
    fused.push_back({std::string(acc.video_id), std::string(segment), score, 0,
                     acc.from_embedding ? HitSource::Embedding
                                        : HitSource::Metadata});
  }
  std::sort(fused.begin(), fused.end(),
            [](const RankedHit& a, const RankedHit& b) {
              return ranks_before(a, b);
            });
  renumber(fused);
  return fused;
}

}  // namespace vidseek
