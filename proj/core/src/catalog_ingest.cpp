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

#include "vidseek/catalog_ingest.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "vidseek/error.hpp"

namespace vidseek {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(Errc::ManifestInvalid, what);
}

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    return ((v & 0xFF) << 24) | ((v & 0xFF00) << 8) | ((v >> 8) & 0xFF00) |
           (v >> 24);
  }
  return v;
}

std::string string_field(const json& j, const char* key, bool required_field,
                         const std::string& where) {
  if (!j.contains(key)) {
    if (required_field) invalid(where + ": missing '" + key + "'");
    return {};
  }
  if (!j.at(key).is_string()) invalid(where + ": '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open manifest '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    invalid("manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) invalid("manifest must be a JSON object");

  Manifest m;
  m.base_dir = path.parent_path();
  const auto dataset = string_field(j, "dataset", true, "manifest");
  const auto d = dataset_from_name(dataset);
  if (!d) invalid("manifest: unknown dataset '" + dataset + "'");
  m.dataset = *d;
  if (!j.contains("dim") || !j.at("dim").is_number_integer() ||
      j.at("dim").get<std::int64_t>() <= 0) {
    invalid("manifest: 'dim' must be a positive integer");
  }
  m.dim = j.at("dim").get<std::size_t>();
  if (!j.contains("videos") || !j.at("videos").is_array()) {
    invalid("manifest: 'videos' must be an array");
  }

  std::set<std::string> ids;
  for (const auto& v : j.at("videos")) {
    if (!v.is_object()) invalid("manifest: video entries must be objects");
    ManifestVideo mv;
    mv.video_id = string_field(v, "videoId", true, "manifest video");
    const std::string where = "manifest video '" + mv.video_id + "'";
    if (mv.video_id.empty()) invalid("manifest: empty videoId");
    if (!ids.insert(mv.video_id).second) invalid(where + ": duplicate videoId");
    mv.title = string_field(v, "title", false, where);
    if (!v.contains("durationMs") || !v.at("durationMs").is_number_integer() ||
        v.at("durationMs").get<std::int64_t>() <= 0) {
      invalid(where + ": 'durationMs' must be a positive integer");
    }
    mv.duration_ms = v.at("durationMs").get<std::int64_t>();
    mv.segments_file =
        string_field(v, "segmentsFile", !is_uniform(m.dataset), where);
    mv.embeddings_file = string_field(v, "embeddingsFile", true, where);
    mv.keyframe_dir = string_field(v, "keyframeDir", false, where);
    if (!mv.segments_file.empty() &&
        !fs::is_regular_file(m.base_dir / mv.segments_file)) {
      invalid(where + ": segments file '" + mv.segments_file + "' not found");
    }
    if (!fs::is_regular_file(m.base_dir / mv.embeddings_file)) {
      invalid(where + ": embeddings file '" + mv.embeddings_file +
              "' not found");
    }
    m.videos.push_back(std::move(mv));
  }
  return m;
}

json to_json(const Manifest& m) {
  json videos = json::array();
  for (const auto& v : m.videos) {
    json e{{"videoId", v.video_id},
           {"title", v.title},
           {"durationMs", v.duration_ms},
           {"embeddingsFile", v.embeddings_file}};
    if (!v.segments_file.empty()) e["segmentsFile"] = v.segments_file;
    if (!v.keyframe_dir.empty()) e["keyframeDir"] = v.keyframe_dir;
    videos.push_back(std::move(e));
  }
  return json{{"dataset", to_string(m.dataset)},
              {"dim", m.dim},
              {"videos", std::move(videos)}};
}

json to_json(const SegmentRecord& r) {
  json annotations = json::array();
  for (const auto& a : r.annotations) annotations.push_back(to_json(a));
  return json{{"kind", "segment"},      {"segmentId", r.segment_id},
              {"startMs", r.start_ms},  {"endMs", r.end_ms},
              {"keyframe", r.keyframe}, {"annotations", std::move(annotations)}};
}

SegmentRecord segment_record_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidRequest, "row is not an object");
  if (j.contains("kind") && j.at("kind") != "segment") {
    throw Error(Errc::InvalidRequest, "row kind must be 'segment'");
  }
  try {
    SegmentRecord r;
    r.segment_id = j.at("segmentId").get<std::string>();
    r.start_ms = j.at("startMs").get<std::int64_t>();
    r.end_ms = j.at("endMs").get<std::int64_t>();
    r.keyframe = j.value("keyframe", std::string());
    for (const auto& a : j.value("annotations", json::array())) {
      r.annotations.push_back(annotation_from_json(a));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidRequest, e.what());
  }
}

std::string segment_id_for(std::string_view video_id, std::size_t index) {
  std::ostringstream out;
  out << video_id << '_' << std::setw(5) << std::setfill('0') << index;
  return out.str();
}

std::vector<SegmentRecord> uniform_segments(std::string_view video_id,
                                            std::int64_t duration_ms,
                                            std::int64_t interval_ms,
                                            std::string_view keyframe_ext) {
  if (duration_ms <= 0) {
    throw Error(Errc::NonPositiveDuration, "duration must be positive");
  }
  if (interval_ms <= 0) {
    throw Error(Errc::NonPositiveDuration, "interval must be positive");
  }
  std::vector<SegmentRecord> out;
  const auto count = static_cast<std::size_t>(
      (duration_ms + interval_ms - 1) / interval_ms);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SegmentRecord r;
    r.segment_id = segment_id_for(video_id, i);
    r.start_ms = static_cast<std::int64_t>(i) * interval_ms;
    r.end_ms = std::min(duration_ms, r.start_ms + interval_ms);
    r.keyframe = std::to_string((r.start_ms + r.end_ms) / 2) +
                 std::string(keyframe_ext);
    out.push_back(std::move(r));
  }
  return out;
}

void write_f32(std::ostream& out, std::span<const float> values) {
  std::string buffer(values.size() * 4, '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t le = to_le(std::bit_cast<std::uint32_t>(values[i]));
    std::memcpy(buffer.data() + i * 4, &le, 4);
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

std::vector<float> read_f32_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot open vector file '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() % 4 != 0) {
    throw Error(Errc::DimensionMismatch,
                "vector file '" + path.string() +
                    "' size is not a multiple of 4 bytes");
  }
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t le;
    std::memcpy(&le, bytes.data() + i * 4, 4);
    out[i] = std::bit_cast<float>(to_le(le));
  }
  return out;
}

json to_json(const IngestReport& r) {
  return json{{"videos", r.videos},
              {"segments", r.segments},
              {"vectors", r.vectors},
              {"warnings", r.warnings}};
}

namespace {

struct PreparedVideo {
  VideoDoc video;
  std::vector<SegmentDoc> segments;
  std::vector<IndexEntry> new_entries;
};

std::vector<SegmentRecord> read_segment_rows(const Manifest& m,
                                             const ManifestVideo& mv,
                                             const IngestHooks& hooks) {
  if (mv.segments_file.empty()) {
    return uniform_segments(mv.video_id, mv.duration_ms);
  }
  const fs::path path = m.base_dir / mv.segments_file;
  std::ifstream in(path);
  if (!in) invalid("cannot open segments file '" + path.string() + "'");
  std::vector<SegmentRecord> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (j.contains("videoId") && j.at("videoId") != mv.video_id) {
        invalid(path.string() + ":" + std::to_string(line_no) +
                ": row belongs to another video");
      }
      rows.push_back(segment_record_from_json(j));
    } catch (const json::exception& e) {
      invalid(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == Errc::ManifestInvalid) throw;
      invalid(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (hooks.on_row) hooks.on_row(mv.video_id, rows.size() - 1);
  }
  return rows;
}

PreparedVideo prepare_video(const Manifest& m, const ManifestVideo& mv,
                            const EmbeddingIndex& index,
                            const MetadataStore& store,
                            const IngestHooks& hooks,
                            std::vector<std::string>& warnings) {
  const auto rows = read_segment_rows(m, mv, hooks);
  const fs::path vec_path = m.base_dir / mv.embeddings_file;
  const auto raw = read_f32_file(vec_path);
  if (raw.size() % m.dim != 0) {
    throw Error(Errc::DimensionMismatch,
                "video '" + mv.video_id + "': embeddings file holds " +
                    std::to_string(raw.size()) +
                    " floats, not a multiple of dim " + std::to_string(m.dim));
  }
  const std::size_t n_vectors = raw.size() / m.dim;
  if (n_vectors != rows.size()) {
    throw Error(Errc::VectorCountMismatch,
                "video '" + mv.video_id + "': " + std::to_string(n_vectors) +
                    " embedding rows for " + std::to_string(rows.size()) +
                    " segments");
  }

  PreparedVideo p;
  p.video.video_id = mv.video_id;
  p.video.title = mv.title;
  p.video.duration_ms = mv.duration_ms;
  p.video.dataset = m.dataset;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    SegmentDoc s;
    s.segment_id = r.segment_id;
    s.video_id = mv.video_id;
    s.start_ms = r.start_ms;
    s.end_ms = r.end_ms;
    s.keyframe_ref = mv.keyframe_dir.empty() || r.keyframe.empty()
                         ? r.keyframe
                         : mv.keyframe_dir + "/" + r.keyframe;
    s.annotations = r.annotations;
    if (!mv.keyframe_dir.empty() && !r.keyframe.empty() &&
        !fs::exists(m.base_dir / mv.keyframe_dir / r.keyframe)) {
      warnings.push_back("video '" + mv.video_id + "': keyframe '" +
                         s.keyframe_ref + "' not found");
    }

    EmbeddingVector v = [&] {
      try {
        return index.normalize(
            std::span<const float>(raw.data() + i * m.dim, m.dim));
      } catch (const Error& e) {
        throw Error(e.code(), "video '" + mv.video_id + "', segment '" +
                                  r.segment_id + "': " + e.what());
      }
    }();
    if (index.contains(r.segment_id)) {
      if (!(index.vector_of(r.segment_id) == v)) {
        throw Error(Errc::DuplicateSegment,
                    "video '" + mv.video_id + "': segment '" + r.segment_id +
                        "' is already indexed with a different vector");
      }
    } else {
      p.new_entries.push_back({r.segment_id, mv.video_id, std::move(v)});
    }
    p.segments.push_back(std::move(s));
  }
  if (rows.empty()) {
    warnings.push_back("video '" + mv.video_id + "' has no segments");
  }
  store.validate(p.video, p.segments);
  return p;
}

}  // namespace

IngestReport ingest_manifest(const fs::path& manifest_path,
                             IndexRegistry& indexes, MetadataStore& store,
                             const std::string& index_name,
                             const IngestHooks& hooks) {
  const Manifest m = load_manifest(manifest_path);
  const auto index = indexes.create(index_name, m.dim);

  IngestReport report;
  for (const auto& mv : m.videos) {
    PreparedVideo p =
        prepare_video(m, mv, *index, store, hooks, report.warnings);
    const std::size_t n_segments = p.segments.size();

    const auto previous = store.find_video(mv.video_id);
    store.upsert_video(p.video, p.segments);
    try {
      if (hooks.before_index_commit) hooks.before_index_commit(mv.video_id);
      index->add_entries(std::move(p.new_entries));
    } catch (...) {
      if (previous) {
        store.upsert_video(previous->video, previous->segments);
      } else {
        store.erase_video(mv.video_id);
      }
      throw;
    }
    report.videos += 1;
    report.segments += n_segments;
    report.vectors += n_segments;
  }
  return report;
}

}  // namespace vidseek
