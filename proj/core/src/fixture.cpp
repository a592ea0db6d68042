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

#include "vidseek/fixture.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vidseek/catalog_ingest.hpp"
#include "vidseek/error.hpp"
#include "vidseek/hashing.hpp"
#include "vidseek/text_encoder.hpp"

namespace vidseek {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Theme {
  std::string word;
  std::vector<std::string> objects;
  std::vector<std::string> events;
};

const std::vector<Theme>& themes() {
  static const std::vector<Theme> kThemes = {
      {"beach", {"person", "umbrella", "surfboard"}, {"swimming", "surfing"}},
      {"snow", {"skis", "person", "car"}, {"skiing", "sledding"}},
      {"wedding", {"person", "cake", "wine glass"}, {"dancing", "kissing"}},
      {"paragliding", {"person", "kite", "bird"}, {"flying", "jumping"}},
      {"underwater", {"fish", "person", "boat"}, {"diving", "swimming"}},
      {"city", {"car", "bus", "traffic light"}, {"walking", "driving"}},
      {"forest", {"dog", "bird", "bicycle"}, {"hiking", "running"}},
      {"concert", {"person", "microphone", "guitar"}, {"singing", "clapping"}},
      {"kitchen", {"knife", "bowl", "oven"}, {"cooking", "chopping"}},
      {"desert", {"camel", "car", "person"}, {"driving", "walking"}},
  };
  return kThemes;
}

const std::vector<std::string> kConcepts = {
    "beach", "ski slope", "ballroom", "sky", "underwater", "street",
    "forest path", "stage", "kitchen", "desert sand", "office", "parking lot"};
const std::vector<std::string> kOcrTexts = {
    "happy birthday", "welcome", "exit", "sale 50%", "just married",
    "breaking news", "the end", "open"};
const std::vector<std::string> kMedObjects = {
    "grasper", "scissors", "needle holder", "uterus", "ovary", "trocar"};
const std::vector<std::string> kMedActions = {
    "cutting", "cauterization", "suturing", "irrigation"};

std::string video_id_for(std::size_t i) {
  std::ostringstream out;
  out << 'v' << std::setw(4) << std::setfill('0') << i;
  return out.str();
}

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

const std::string& pick(DeterministicRng& rng,
                        const std::vector<std::string>& from) {
  return from[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(from.size()) - 1))];
}

std::vector<double> perturb(std::span<const double> base, double spread,
                            DeterministicRng& rng) {
  const auto noise = rng.unit_vector(base.size());
  std::vector<double> out(base.size());
  double norm2 = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    out[i] = base[i] + spread * noise[i];
    norm2 += out[i] * out[i];
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : out) x *= inv;
  return out;
}

std::vector<std::vector<double>> theme_directions(std::size_t groups,
                                                  std::size_t dim) {
  const HashedTokenEncoder encoder;
  std::vector<std::vector<double>> dirs;
  for (std::size_t g = 0; g < groups; ++g) {
    const auto raw = encoder.token_direction(fixture_themes()[g], dim);
    std::vector<double> v(raw.begin(), raw.end());
    // Gram-Schmidt against earlier themes while the space allows it.
    if (g < dim) {
      for (const auto& prev : dirs) {
        double d = 0.0;
        for (std::size_t i = 0; i < dim; ++i) d += v[i] * prev[i];
        for (std::size_t i = 0; i < dim; ++i) v[i] -= d * prev[i];
      }
    }
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

std::vector<SegmentRecord> shot_segments(const std::string& video_id,
                                         std::size_t count,
                                         DeterministicRng& rng) {
  std::vector<SegmentRecord> rows;
  std::int64_t t = 0;
  for (std::size_t i = 0; i < count; ++i) {
    SegmentRecord r;
    r.segment_id = segment_id_for(video_id, i);
    r.start_ms = t;
    r.end_ms = t + rng.uniform_int(800, 6000);
    r.keyframe = std::to_string((r.start_ms + r.end_ms) / 2) + ".svg";
    t = r.end_ms;
    rows.push_back(std::move(r));
  }
  return rows;
}

void annotate(SegmentRecord& r, Dataset dataset, std::size_t group,
              DeterministicRng& rng) {
  const Theme& theme = themes()[group % themes().size()];
  if (dataset == Dataset::V) {
    r.annotations.push_back({Modality::Concept,
                             kConcepts[group % kConcepts.size()],
                             round3(0.6 + 0.4 * rng.uniform())});
    if (rng.uniform() < 0.4) {
      r.annotations.push_back(
          {Modality::Concept, pick(rng, kConcepts), round3(0.5 * rng.uniform())});
    }
    const auto n_objects = rng.uniform_int(0, 2);
    for (std::int64_t i = 0; i < n_objects; ++i) {
      r.annotations.push_back({Modality::Object, pick(rng, theme.objects),
                               round3(0.3 + 0.7 * rng.uniform())});
    }
    if (rng.uniform() < 0.3) {
      r.annotations.push_back({Modality::Event, pick(rng, theme.events),
                               round3(0.2 + 0.8 * rng.uniform())});
    }
    if (rng.uniform() < 0.08) {
      r.annotations.push_back({Modality::Text, pick(rng, kOcrTexts), 1.0});
    }
  } else if (dataset == Dataset::S) {
    const auto n_objects = rng.uniform_int(1, 2);
    for (std::int64_t i = 0; i < n_objects; ++i) {
      r.annotations.push_back({Modality::MedObject, pick(rng, kMedObjects),
                               round3(0.3 + 0.7 * rng.uniform())});
    }
    if (rng.uniform() < 0.5) {
      r.annotations.push_back({Modality::MedAction, pick(rng, kMedActions),
                               round3(0.3 + 0.7 * rng.uniform())});
    }
    if (rng.uniform() < 0.05) {
      r.annotations.push_back({Modality::Text, pick(rng, kOcrTexts), 1.0});
    }
  }
}

std::string keyframe_svg(const std::string& video_id, std::int64_t mid_ms,
                         std::size_t group) {
  const unsigned hue = static_cast<unsigned>((group * 67) % 360);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"160\" height=\"90\">"
      << "<rect width=\"160\" height=\"90\" fill=\"hsl(" << hue
      << ",55%,45%)\"/>"
      << "<text x=\"8\" y=\"50\" font-family=\"monospace\" font-size=\"13\" "
         "fill=\"#fff\">"
      << video_id << ' ' << mid_ms << "ms</text></svg>\n";
  return svg.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::InternalError, "cannot write " + path.string());
}

}  // namespace

const std::vector<std::string>& fixture_themes() {
  static const std::vector<std::string> kWords = [] {
    std::vector<std::string> words;
    for (const auto& t : themes()) words.push_back(t.word);
    for (std::size_t i = words.size(); i < 64; ++i) {
      words.push_back("theme" + std::to_string(i));
    }
    return words;
  }();
  return kWords;
}

FixtureInfo generate_fixture(const FixtureOptions& options,
                             const fs::path& out_dir) {
  if (options.videos == 0 || options.segments_per_video == 0 ||
      options.dim == 0) {
    throw Error(Errc::InvalidRequest, "fixture counts must be at least 1");
  }
  const std::size_t groups =
      options.groups == 0 ? std::min<std::size_t>(4, options.videos)
                          : options.groups;
  if (groups > fixture_themes().size()) {
    throw Error(Errc::InvalidRequest, "too many fixture groups");
  }

  fs::create_directories(out_dir / "segments");
  fs::create_directories(out_dir / "embeddings");

  DeterministicRng rng(options.seed);
  const auto dirs = theme_directions(groups, options.dim);

  FixtureInfo info;
  info.manifest = out_dir / "manifest.json";
  info.themes.assign(fixture_themes().begin(),
                     fixture_themes().begin() + static_cast<std::ptrdiff_t>(groups));

  std::vector<float> duplicate_vector;
  std::string duplicate_original;
  const std::size_t total_segments = options.videos * options.segments_per_video;
  const bool plant = options.plant_duplicate && total_segments >= 2;
  const std::size_t copy_video = options.videos > 1 ? 1 : 0;

  Manifest manifest;
  manifest.dataset = options.dataset;
  manifest.dim = options.dim;
  for (std::size_t v = 0; v < options.videos; ++v) {
    const std::string vid = video_id_for(v);
    const std::size_t group = v % groups;
    info.group_of[vid] = group;

    std::vector<SegmentRecord> rows;
    if (is_uniform(options.dataset)) {
      const auto duration =
          static_cast<std::int64_t>(options.segments_per_video - 1) * 1000 +
          rng.uniform_int(1, 1000);
      rows = uniform_segments(vid, duration, 1000, ".svg");
    } else {
      rows = shot_segments(vid, options.segments_per_video, rng);
    }
    for (auto& r : rows) annotate(r, options.dataset, group, rng);

    const auto video_dir = perturb(dirs[group], options.video_spread, rng);
    std::ostringstream vectors;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto seg = perturb(video_dir, options.segment_spread, rng);
      std::vector<float> f(seg.begin(), seg.end());
      if (plant && v == 0 && i == 0) {
        duplicate_vector = f;
        duplicate_original = rows[i].segment_id;
      }
      if (plant && v == copy_video && i + 1 == rows.size()) {
        f = duplicate_vector;
        info.duplicate = {duplicate_original, rows[i].segment_id};
      }
      write_f32(vectors, f);
    }

    std::string segments_text;
    for (const auto& r : rows) segments_text += to_json(r).dump() + '\n';
    write_text(out_dir / "segments" / (vid + ".jsonl"), segments_text);
    write_text(out_dir / "embeddings" / (vid + ".f32"), vectors.str());

    if (options.write_keyframes) {
      const fs::path kdir = out_dir / "keyframes" / vid;
      fs::create_directories(kdir);
      for (const auto& r : rows) {
        write_text(kdir / r.keyframe,
                   keyframe_svg(vid, (r.start_ms + r.end_ms) / 2, group));
      }
    }

    ManifestVideo mv;
    mv.video_id = vid;
    mv.title = info.themes[group] + " video " + std::to_string(v);
    mv.duration_ms = rows.back().end_ms;
    mv.segments_file = "segments/" + vid + ".jsonl";
    mv.embeddings_file = "embeddings/" + vid + ".f32";
    mv.keyframe_dir = "keyframes/" + vid;
    manifest.videos.push_back(std::move(mv));
  }

  write_text(info.manifest, to_json(manifest).dump(2) + '\n');

  json truth{{"seed", options.seed},
             {"themes", info.themes},
             {"groups", info.group_of}};
  if (info.duplicate) {
    truth["duplicate"] = {{"original", info.duplicate->first},
                          {"copy", info.duplicate->second}};
  }
  write_text(out_dir / "ground_truth.json", truth.dump(2) + '\n');
  return info;
}

FixtureInfo load_fixture_info(const fs::path& dir) {
  std::ifstream in(dir / "ground_truth.json");
  if (!in) {
    throw Error(Errc::ManifestInvalid, "no ground_truth.json in " + dir.string());
  }
  const json truth = json::parse(in);
  FixtureInfo info;
  info.manifest = dir / "manifest.json";
  info.themes = truth.at("themes").get<std::vector<std::string>>();
  info.group_of = truth.at("groups").get<std::map<std::string, std::size_t>>();
  if (truth.contains("duplicate")) {
    info.duplicate = {truth["duplicate"]["original"].get<std::string>(),
                      truth["duplicate"]["copy"].get<std::string>()};
  }
  return info;
}

}  // namespace vidseek
