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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vidseek/modality.hpp"

namespace vidseek {

struct FixtureOptions {
  std::uint64_t seed = 42;
  std::size_t videos = 10;
  std::size_t segments_per_video = 20;
  std::size_t dim = 64;
  std::size_t groups = 0;  // 0 = min(4, videos)
  Dataset dataset = Dataset::V;
  double video_spread = 0.5;    // video direction = theme + spread * noise
  double segment_spread = 0.35; // segment = video direction + spread * noise
  bool plant_duplicate = true;
  bool write_keyframes = true;
};

struct FixtureInfo {
  std::filesystem::path manifest;
  std::vector<std::string> themes;              // one per group
  std::map<std::string, std::size_t> group_of;  // videoId -> group
  /// (original, copy): the copy segment stores the exact original vector.
  std::optional<std::pair<std::string, std::string>> duplicate;
};

/// Writes a synthetic corpus under `out_dir`:
///
///   manifest.json, segments/<vid>.jsonl, embeddings/<vid>.f32,
///   keyframes/<vid>/<midMs>.svg, ground_truth.json
///
/// Videos are split round-robin into groups. Each group has an orthogonal
/// theme direction built from the HashedTokenEncoder direction of its theme
/// word, so the theme word retrieves its group. Output depends only on the
/// options; equal options give byte-identical files.
FixtureInfo generate_fixture(const FixtureOptions& options,
                             const std::filesystem::path& out_dir);

/// Reads ground_truth.json written by generate_fixture.
FixtureInfo load_fixture_info(const std::filesystem::path& dir);

/// Theme words in group order.
const std::vector<std::string>& fixture_themes();

}  // namespace vidseek
