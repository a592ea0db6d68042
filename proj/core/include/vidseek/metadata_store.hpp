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
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "vidseek/modality.hpp"
#include "vidseek/ranked_hit.hpp"

namespace vidseek {

struct Annotation {
  Modality modality = Modality::Concept;
  std::string label;
  double score = 0.0;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct SegmentDoc {
  std::string segment_id;
  std::string video_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string keyframe_ref;
  std::vector<Annotation> annotations;

  friend bool operator==(const SegmentDoc&, const SegmentDoc&) = default;
};

struct VideoDoc {
  std::string video_id;
  std::string title;
  std::int64_t duration_ms = 0;
  Dataset dataset = Dataset::V;
  std::vector<std::string> segment_ids;  // sorted by startMs

  friend bool operator==(const VideoDoc&, const VideoDoc&) = default;
};

struct StoredVideo {
  VideoDoc video;
  std::vector<SegmentDoc> segments;  // sorted by startMs
};

struct UpsertCounts {
  std::size_t videos = 0;
  std::size_t segments = 0;
};

/// Uniform datasets slice videos into segments of exactly this length.
inline constexpr std::int64_t kUniformSegmentMs = 1000;

// JSON-lines record codecs. Parsers throw Error(InvalidRequest) on malformed
// records; callers attach file context.
nlohmann::json to_json(const Annotation& a);
nlohmann::json to_json(const SegmentDoc& s);
nlohmann::json to_json(const VideoDoc& v);
Annotation annotation_from_json(const nlohmann::json& j);
SegmentDoc segment_from_json(const nlohmann::json& j);
VideoDoc video_from_json(const nlohmann::json& j);

/// In-process document store for per-segment annotations with an inverted
/// index (modality, label) -> {segmentId: score}.
///
/// Readers take a shared lock; upserts are exclusive.
class MetadataStore {
 public:
  MetadataStore() = default;
  MetadataStore(const MetadataStore&) = delete;
  MetadataStore& operator=(const MetadataStore&) = delete;

  /// Replaces any previous version of the video. Labels are case-folded.
  /// Throws Error(InvariantViolation) naming the first failing segment; the
  /// store is unchanged in that case.
  UpsertCounts upsert_video(VideoDoc video, std::vector<SegmentDoc> segments);

  /// Same checks as upsert_video without modifying the store.
  void validate(const VideoDoc& video,
                const std::vector<SegmentDoc>& segments) const;

  /// Removes a video and its segments. Returns false when absent.
  bool erase_video(std::string_view video_id);

  /// Segments with an annotation of `modality` whose label equals `label`
  /// (case-insensitive; substring match for Text), score >= min_score,
  /// ranked by annotation score then (videoId, segmentId).
  std::vector<RankedHit> find_segments(
      Modality modality, std::string_view label, double min_score = 0.0,
      std::optional<std::size_t> limit = std::nullopt) const;
  /// Wire-name variant; throws Error(UnknownModality).
  std::vector<RankedHit> find_segments(
      std::string_view modality, std::string_view label, double min_score = 0.0,
      std::optional<std::size_t> limit = std::nullopt) const;

  std::set<std::string> video_ids_for_term(Modality modality,
                                           std::string_view label,
                                           double min_score = 0.0) const;
  std::set<std::string> video_ids_for_term(std::string_view modality,
                                           std::string_view label,
                                           double min_score = 0.0) const;

  /// Throws Error(UnknownVideo).
  StoredVideo get_video(std::string_view video_id) const;
  std::optional<StoredVideo> find_video(std::string_view video_id) const;
  /// Throws Error(UnknownSegment).
  SegmentDoc get_segment(std::string_view segment_id) const;
  std::optional<SegmentDoc> find_segment(std::string_view segment_id) const;

  std::vector<std::string> video_ids() const;
  std::size_t video_count() const;
  std::size_t segment_count() const;

  /// Reserved-key JSON documents (e.g. persisted clusters).
  void put_document(const std::string& key, nlohmann::json value);
  std::optional<nlohmann::json> get_document(std::string_view key) const;

  /// Canonical JSON-lines dump: videos by id, each followed by its segments in
  /// time order, then documents by key. Equal stores produce equal dumps.
  std::string dump() const;
  void dump(std::ostream& out) const;

  /// Loads records produced by dump() (or hand-written in that format) and
  /// upserts them. Throws Error(InvalidRequest) on malformed lines.
  void load(std::istream& in);

 private:
  using Postings = std::map<std::string, std::map<std::string, double>>;

  void validate_locked(const VideoDoc& video,
                       const std::vector<SegmentDoc>& segments) const;
  void erase_locked(const std::string& video_id);
  std::map<std::string, double> matches_locked(Modality modality,
                                               const std::string& folded,
                                               double min_score) const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, StoredVideo, std::less<>> videos_;
  struct SegmentSlot {
    std::string video_id;
    std::size_t position;  // into StoredVideo::segments
  };
  std::unordered_map<std::string, SegmentSlot> segment_slots_;
  std::map<Modality, Postings> postings_;
  std::map<std::string, nlohmann::json, std::less<>> documents_;
};

}  // namespace vidseek
