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

#include "vidseek/metadata_store.hpp"

#include <algorithm>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "vidseek/error.hpp"

namespace vidseek {

using nlohmann::json;

namespace {

[[noreturn]] void bad_record(const std::string& what) {
  throw Error(Errc::InvalidRequest, what);
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    bad_record(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad_record(std::string("field '") + key + "' has the wrong type");
  }
}

[[noreturn]] void violation(const std::string& segment_id,
                            const std::string& what) {
  throw Error(Errc::InvariantViolation,
              "segment '" + segment_id + "': " + what);
}

bool start_order(const SegmentDoc& a, const SegmentDoc& b) {
  if (a.start_ms != b.start_ms) return a.start_ms < b.start_ms;
  return a.segment_id < b.segment_id;
}

}  // namespace

json to_json(const Annotation& a) {
  return json{{"modality", to_string(a.modality)},
              {"label", a.label},
              {"score", a.score}};
}

json to_json(const SegmentDoc& s) {
  json annotations = json::array();
  for (const auto& a : s.annotations) annotations.push_back(to_json(a));
  return json{{"kind", "segment"},       {"segmentId", s.segment_id},
              {"videoId", s.video_id},   {"startMs", s.start_ms},
              {"endMs", s.end_ms},       {"keyframeRef", s.keyframe_ref},
              {"annotations", annotations}};
}

json to_json(const VideoDoc& v) {
  return json{{"kind", "video"},
              {"videoId", v.video_id},
              {"title", v.title},
              {"durationMs", v.duration_ms},
              {"dataset", to_string(v.dataset)},
              {"segmentIds", v.segment_ids}};
}

Annotation annotation_from_json(const json& j) {
  Annotation a;
  const auto modality = required<std::string>(j, "modality");
  const auto m = modality_from_name(modality);
  if (!m) {
    throw Error(Errc::UnknownModality, "unknown modality '" + modality + "'");
  }
  a.modality = *m;
  a.label = required<std::string>(j, "label");
  a.score = required<double>(j, "score");
  return a;
}

SegmentDoc segment_from_json(const json& j) {
  SegmentDoc s;
  s.segment_id = required<std::string>(j, "segmentId");
  s.video_id = required<std::string>(j, "videoId");
  s.start_ms = required<std::int64_t>(j, "startMs");
  s.end_ms = required<std::int64_t>(j, "endMs");
  s.keyframe_ref = j.value("keyframeRef", std::string());
  if (j.contains("annotations")) {
    if (!j.at("annotations").is_array()) {
      bad_record("field 'annotations' must be an array");
    }
    for (const auto& a : j.at("annotations")) {
      s.annotations.push_back(annotation_from_json(a));
    }
  }
  return s;
}

VideoDoc video_from_json(const json& j) {
  VideoDoc v;
  v.video_id = required<std::string>(j, "videoId");
  v.title = j.value("title", std::string());
  v.duration_ms = required<std::int64_t>(j, "durationMs");
  const auto dataset = required<std::string>(j, "dataset");
  const auto d = dataset_from_name(dataset);
  if (!d) bad_record("unknown dataset '" + dataset + "'");
  v.dataset = *d;
  if (j.contains("segmentIds")) {
    v.segment_ids = required<std::vector<std::string>>(j, "segmentIds");
  }
  return v;
}

void MetadataStore::validate(const VideoDoc& video,
                             const std::vector<SegmentDoc>& segments) const {
  std::shared_lock lock(mutex_);
  validate_locked(video, segments);
}

void MetadataStore::validate_locked(
    const VideoDoc& video, const std::vector<SegmentDoc>& segments) const {
  if (video.video_id.empty()) {
    throw Error(Errc::InvariantViolation, "video id must not be empty");
  }
  if (video.duration_ms < 0) {
    throw Error(Errc::InvariantViolation,
                "video '" + video.video_id + "' has negative duration");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& s : segments) {
    if (s.segment_id.empty()) violation(s.segment_id, "empty segment id");
    if (s.video_id != video.video_id) {
      violation(s.segment_id, "belongs to video '" + s.video_id +
                                  "', expected '" + video.video_id + "'");
    }
    if (!seen.insert(s.segment_id).second) {
      violation(s.segment_id, "duplicate segment id");
    }
    if (const auto it = segment_slots_.find(s.segment_id);
        it != segment_slots_.end() && it->second.video_id != video.video_id) {
      violation(s.segment_id,
                "segment id already used by video '" + it->second.video_id + "'");
    }
    if (s.start_ms < 0) violation(s.segment_id, "startMs is negative");
    if (s.end_ms <= s.start_ms) violation(s.segment_id, "endMs <= startMs");
    if (s.end_ms > video.duration_ms) {
      violation(s.segment_id, "endMs exceeds the video duration");
    }
    for (const auto& a : s.annotations) {
      if (a.label.empty()) violation(s.segment_id, "empty annotation label");
      if (!(a.score >= 0.0 && a.score <= 1.0)) {
        violation(s.segment_id, "annotation score outside [0, 1]");
      }
    }
  }

  std::vector<const SegmentDoc*> ordered;
  ordered.reserve(segments.size());
  for (const auto& s : segments) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const SegmentDoc* a, const SegmentDoc* b) {
              return start_order(*a, *b);
            });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->start_ms < ordered[i - 1]->end_ms) {
      violation(ordered[i]->segment_id,
                "overlaps segment '" + ordered[i - 1]->segment_id + "'");
    }
  }
  if (is_uniform(video.dataset)) {
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      const auto length = ordered[i]->end_ms - ordered[i]->start_ms;
      const bool last = i + 1 == ordered.size();
      if (last ? length > kUniformSegmentMs : length != kUniformSegmentMs) {
        violation(ordered[i]->segment_id,
                  "uniform segments must be " +
                      std::to_string(kUniformSegmentMs) + " ms long");
      }
    }
  }
  if (!video.segment_ids.empty()) {
    std::set<std::string_view> listed(video.segment_ids.begin(),
                                      video.segment_ids.end());
    if (listed.size() != video.segment_ids.size() ||
        listed != std::set<std::string_view>(seen.begin(), seen.end())) {
      throw Error(Errc::InvariantViolation,
                  "video '" + video.video_id +
                      "': segmentIds do not match the supplied segments");
    }
  }
}

UpsertCounts MetadataStore::upsert_video(VideoDoc video,
                                         std::vector<SegmentDoc> segments) {
  std::unique_lock lock(mutex_);
  validate_locked(video, segments);

  for (auto& s : segments) {
    for (auto& a : s.annotations) a.label = fold_case(a.label);
  }
  std::sort(segments.begin(), segments.end(), start_order);
  video.segment_ids.clear();
  for (const auto& s : segments) video.segment_ids.push_back(s.segment_id);

  erase_locked(video.video_id);
  const std::string video_id = video.video_id;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    segment_slots_[s.segment_id] = {video_id, i};
    for (const auto& a : s.annotations) {
      auto& slot = postings_[a.modality][a.label][s.segment_id];
      slot = std::max(slot, a.score);
    }
  }
  const UpsertCounts counts{1, segments.size()};
  videos_[video_id] = StoredVideo{std::move(video), std::move(segments)};
  return counts;
}

bool MetadataStore::erase_video(std::string_view video_id) {
  std::unique_lock lock(mutex_);
  if (videos_.find(video_id) == videos_.end()) return false;
  erase_locked(std::string(video_id));
  return true;
}

void MetadataStore::erase_locked(const std::string& video_id) {
  const auto it = videos_.find(video_id);
  if (it == videos_.end()) return;
  for (const auto& s : it->second.segments) {
    segment_slots_.erase(s.segment_id);
    for (const auto& a : s.annotations) {
      auto& by_label = postings_[a.modality];
      if (auto label_it = by_label.find(a.label); label_it != by_label.end()) {
        label_it->second.erase(s.segment_id);
        if (label_it->second.empty()) by_label.erase(label_it);
      }
    }
  }
  videos_.erase(it);
}

std::map<std::string, double> MetadataStore::matches_locked(
    Modality modality, const std::string& folded, double min_score) const {
  std::map<std::string, double> best;
  const auto by_modality = postings_.find(modality);
  if (by_modality == postings_.end()) return best;
  const auto collect = [&](const std::map<std::string, double>& postings) {
    for (const auto& [segment_id, score] : postings) {
      if (score < min_score) continue;
      auto [it, inserted] = best.emplace(segment_id, score);
      if (!inserted) it->second = std::max(it->second, score);
    }
  };
  if (modality == Modality::Text) {
    for (const auto& [label, postings] : by_modality->second) {
      if (label.find(folded) != std::string::npos) collect(postings);
    }
  } else if (const auto it = by_modality->second.find(folded);
             it != by_modality->second.end()) {
    collect(it->second);
  }
  return best;
}

std::vector<RankedHit> MetadataStore::find_segments(
    Modality modality, std::string_view label, double min_score,
    std::optional<std::size_t> limit) const {
  if (label.empty()) {
    throw Error(Errc::InvalidRequest, "label query must not be empty");
  }
  std::shared_lock lock(mutex_);
  const auto matches = matches_locked(modality, fold_case(label), min_score);
  std::vector<RankedHit> hits;
  hits.reserve(matches.size());
  for (const auto& [segment_id, score] : matches) {
    hits.push_back({segment_slots_.at(segment_id).video_id, segment_id, score,
                    0, HitSource::Metadata});
  }
  std::sort(hits.begin(), hits.end(),
            [](const RankedHit& a, const RankedHit& b) {
              return ranks_before(a, b);
            });
  if (limit && hits.size() > *limit) hits.resize(*limit);
  renumber(hits);
  return hits;
}

std::vector<RankedHit> MetadataStore::find_segments(
    std::string_view modality, std::string_view label, double min_score,
    std::optional<std::size_t> limit) const {
  return find_segments(parse_modality(modality), label, min_score, limit);
}

std::set<std::string> MetadataStore::video_ids_for_term(
    Modality modality, std::string_view label, double min_score) const {
  if (label.empty()) {
    throw Error(Errc::InvalidRequest, "label query must not be empty");
  }
  std::shared_lock lock(mutex_);
  std::set<std::string> out;
  for (const auto& [segment_id, _] :
       matches_locked(modality, fold_case(label), min_score)) {
    out.insert(segment_slots_.at(segment_id).video_id);
  }
  return out;
}

std::set<std::string> MetadataStore::video_ids_for_term(
    std::string_view modality, std::string_view label, double min_score) const {
  return video_ids_for_term(parse_modality(modality), label, min_score);
}

StoredVideo MetadataStore::get_video(std::string_view video_id) const {
  if (auto v = find_video(video_id)) return std::move(*v);
  throw Error(Errc::UnknownVideo,
              "video '" + std::string(video_id) + "' is not in the store");
}

std::optional<StoredVideo> MetadataStore::find_video(
    std::string_view video_id) const {
  std::shared_lock lock(mutex_);
  const auto it = videos_.find(video_id);
  if (it == videos_.end()) return std::nullopt;
  return it->second;
}

SegmentDoc MetadataStore::get_segment(std::string_view segment_id) const {
  if (auto s = find_segment(segment_id)) return std::move(*s);
  throw Error(Errc::UnknownSegment,
              "segment '" + std::string(segment_id) + "' is not in the store");
}

std::optional<SegmentDoc> MetadataStore::find_segment(
    std::string_view segment_id) const {
  std::shared_lock lock(mutex_);
  const auto it = segment_slots_.find(std::string(segment_id));
  if (it == segment_slots_.end()) return std::nullopt;
  return videos_.find(it->second.video_id)->second.segments[it->second.position];
}

std::vector<std::string> MetadataStore::video_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  out.reserve(videos_.size());
  for (const auto& [id, _] : videos_) out.push_back(id);
  return out;
}

std::size_t MetadataStore::video_count() const {
  std::shared_lock lock(mutex_);
  return videos_.size();
}

std::size_t MetadataStore::segment_count() const {
  std::shared_lock lock(mutex_);
  return segment_slots_.size();
}

void MetadataStore::put_document(const std::string& key, json value) {
  std::unique_lock lock(mutex_);
  documents_[key] = std::move(value);
}

std::optional<json> MetadataStore::get_document(std::string_view key) const {
  std::shared_lock lock(mutex_);
  const auto it = documents_.find(key);
  if (it == documents_.end()) return std::nullopt;
  return std::optional<json>(std::in_place, it->second);
}

std::string MetadataStore::dump() const {
  std::ostringstream out;
  dump(out);
  return out.str();
}

void MetadataStore::dump(std::ostream& out) const {
  std::shared_lock lock(mutex_);
  for (const auto& [_, stored] : videos_) {
    out << to_json(stored.video).dump() << '\n';
    for (const auto& s : stored.segments) out << to_json(s).dump() << '\n';
  }
  for (const auto& [key, value] : documents_) {
    out << json{{"kind", "document"}, {"key", key}, {"value", value}}.dump()
        << '\n';
  }
}

void MetadataStore::load(std::istream& in) {
  std::map<std::string, VideoDoc> videos;
  std::map<std::string, std::vector<SegmentDoc>> segments;
  std::vector<std::pair<std::string, json>> documents;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      const auto kind = required<std::string>(j, "kind");
      if (kind == "video") {
        auto v = video_from_json(j);
        videos[v.video_id] = std::move(v);
      } else if (kind == "segment") {
        auto s = segment_from_json(j);
        segments[s.video_id].push_back(std::move(s));
      } else if (kind == "document") {
        documents.emplace_back(required<std::string>(j, "key"),
                               j.value("value", json()));
      } else {
        bad_record("unknown record kind '" + kind + "'");
      }
    } catch (const json::exception& e) {
      bad_record("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  for (auto& [id, segs] : segments) {
    if (videos.count(id) == 0) {
      bad_record("segments reference unknown video '" + id + "'");
    }
  }
  for (auto& [id, video] : videos) {
    upsert_video(std::move(video), std::move(segments[id]));
  }
  for (auto& [key, value] : documents) put_document(key, std::move(value));
}

}  // namespace vidseek
