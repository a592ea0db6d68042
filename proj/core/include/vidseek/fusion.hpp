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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vidseek/error.hpp"
#include "vidseek/ranked_hit.hpp"

namespace vidseek {

enum class MergeStrategy { FilterByVideos, RrfFuse, EmbeddingOnly, MetadataOnly };

std::string_view to_string(MergeStrategy s) noexcept;
std::optional<MergeStrategy> merge_strategy_from_name(std::string_view name) noexcept;

inline constexpr int kDefaultRrfConstant = 60;

struct MergePolicy {
  MergeStrategy strategy = MergeStrategy::FilterByVideos;
  int k_const = kDefaultRrfConstant;  // RrfFuse only, >= 1

  friend bool operator==(const MergePolicy&, const MergePolicy&) = default;
};

struct TemporalParams {
  std::int64_t window_ms = 30'000;
  std::size_t per_stage_depth = 1000;

  friend bool operator==(const TemporalParams&, const TemporalParams&) = default;
};

/// Throws Error(InvalidRequest) on k_const < 1, window_ms <= 0 or depth 0.
void validate(const MergePolicy& policy);
void validate(const TemporalParams& params);

/// Keeps hits whose video is in `allowed`, preserving order; ranks 1..m.
std::vector<RankedHit> filter_by_videos(std::span<const RankedHit> hits,
                                        const std::set<std::string>& allowed);

/// Reciprocal-rank fusion: each distinct segment scores
/// sum over lists of 1 / (k_const + rank). Per-segment terms are added in
/// ascending rank order, so the result does not depend on list order.
/// A fused hit is tagged Embedding if any embedding list contributed to it.
std::vector<RankedHit> rrf_fuse(std::span<const std::vector<RankedHit>> lists,
                                int k_const = kDefaultRrfConstant);

template <class T>
struct Page {
  std::vector<T> items;
  std::size_t page = 0;
  std::size_t page_size = 1;
  std::size_t total_items = 0;
  std::size_t total_pages = 0;
};

/// Slice [page * page_size, (page + 1) * page_size) with totals. Pages past
/// the end are empty; page_size must be >= 1.
template <class T>
Page<T> paginate(std::span<const T> all, std::size_t page,
                 std::size_t page_size) {
  if (page_size == 0) {
    throw Error(Errc::InvalidRequest, "pageSize must be at least 1");
  }
  Page<T> out;
  out.page = page;
  out.page_size = page_size;
  out.total_items = all.size();
  out.total_pages = (all.size() + page_size - 1) / page_size;
  if (page < out.total_pages) {
    const std::size_t begin = page * page_size;
    const std::size_t end = std::min(all.size(), begin + page_size);
    out.items.assign(all.begin() + static_cast<std::ptrdiff_t>(begin),
                     all.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

}  // namespace vidseek
