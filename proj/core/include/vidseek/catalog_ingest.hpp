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
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "vidseek/embedding_index.hpp"
#include "vidseek/metadata_store.hpp"
#include "vidseek/modality.hpp"

namespace vidseek {

struct ManifestVideo {
  std::string video_id;
  std::string title;
  std::int64_t duration_ms = 0;
  std::string segments_file;    // relative to the manifest; optional for M
  std::string embeddings_file;  // relative to the manifest
  std::string keyframe_dir;     // prefix for keyframe references
};

struct Manifest {
  Dataset dataset = Dataset::V;
  std::size_t dim = kDefaultEmbeddingDim;
  std::vector<ManifestVideo> videos;
  std::filesystem::path base_dir;  // directory holding manifest.json
};

/// Throws Error(ManifestInvalid) on syntax errors, bad values, duplicate
/// video ids or referenced files that do not exist.
Manifest load_manifest(const std::filesystem::path& path);
nlohmann::json to_json(const Manifest& manifest);

/// One row of a segments file.
struct SegmentRecord {
  std::string segment_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string keyframe;  // file name inside the video's keyframe dir
  std::vector<Annotation> annotations;

  friend bool operator==(const SegmentRecord&, const SegmentRecord&) = default;
};

nlohmann::json to_json(const SegmentRecord& r);
/// Throws Error(InvalidRequest) on malformed rows.
SegmentRecord segment_record_from_json(const nlohmann::json& j);

/// Segment ids generated for uniform slicing: "<videoId>_<index:05>".
std::string segment_id_for(std::string_view video_id, std::size_t index);

/// Tiles [0, duration_ms) with ceil(duration/interval) slices; the last one
/// holds the remainder. Each keyframe is named after the slice midpoint in
/// milliseconds plus `keyframe_ext`. Throws Error(NonPositiveDuration).
std::vector<SegmentRecord> uniform_segments(std::string_view video_id,
                                            std::int64_t duration_ms,
                                            std::int64_t interval_ms = 1000,
                                            std::string_view keyframe_ext = ".jpg");

/// Raw little-endian float32, row-major, no header.
void write_f32(std::ostream& out, std::span<const float> values);
std::vector<float> read_f32_file(const std::filesystem::path& path);

struct IngestReport {
  std::size_t videos = 0;
  std::size_t segments = 0;
  std::size_t vectors = 0;
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const IngestReport& report);

/// Fault-injection points. on_row runs after each parsed segment row;
/// before_index_commit runs after the store accepted a video and before its
/// vectors are added. Throwing from either aborts the video.
struct IngestHooks {
  std::function<void(const std::string& video_id, std::size_t row)> on_row;
  std::function<void(const std::string& video_id)> before_index_commit;
};

/// Loads every video of the manifest into `indexes[index_name]` (created
/// with the manifest dim if missing) and `store`. Each video commits
/// atomically: a failure leaves no trace of that video and stops the run.
/// Re-ingesting identical data is a no-op on the index and the store.
///
/// Errors: ManifestInvalid, VectorCountMismatch, DimensionMismatch,
/// ZeroVector, DuplicateSegment (same id with a different vector),
/// InvariantViolation.
IngestReport ingest_manifest(const std::filesystem::path& manifest_path,
                             IndexRegistry& indexes, MetadataStore& store,
                             const std::string& index_name,
                             const IngestHooks& hooks = {});

}  // namespace vidseek
