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

#include "vidseek/explore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vidseek/error.hpp"
#include "vidseek/hashing.hpp"

namespace vidseek {

using nlohmann::json;

namespace {

using Point = std::vector<double>;

// Medoid sums closer than this are ties (vectors are stored as float).
constexpr double kMedoidTieEps = 1e-6;

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool normalize_in_place(Point& v) {
  const double n = std::sqrt(dot(v, v));
  if (!(n >= 1e-9)) return false;
  for (auto& x : v) x /= n;
  return true;
}

std::optional<Point> mean_direction(const EmbeddingIndex& index,
                                    const StoredVideo& video,
                                    std::size_t& vectors_seen) {
  Point sum(index.dim(), 0.0);
  vectors_seen = 0;
  for (const auto& s : video.segments) {
    if (!index.contains(s.segment_id)) continue;
    const auto v = index.vector_of(s.segment_id);
    const auto values = v.values();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += values[i];
    ++vectors_seen;
  }
  if (vectors_seen == 0) return std::nullopt;
  for (auto& x : sum) x /= static_cast<double>(vectors_seen);
  if (!normalize_in_place(sum)) return std::nullopt;
  return sum;
}

EmbeddingVector to_embedding(const Point& p) {
  std::vector<float> f(p.begin(), p.end());
  return EmbeddingVector::normalize(f);
}

// Index in [0, weights.size()) drawn proportionally to weights.
std::size_t weighted_pick(const std::vector<double>& weights, double total,
                          DeterministicRng& rng) {
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (acc > target) return i;
  }
  return last_positive;
}

std::vector<std::size_t> seed_centers(const std::vector<Point>& xs,
                                      std::size_t k, DeterministicRng& rng) {
  const std::size_t n = xs.size();
  const std::size_t trials =
      2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
  std::vector<std::size_t> centers;
  centers.push_back(static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)));

  const auto sq_dist = [&](std::size_t a, std::size_t b) {
    return std::max(0.0, 2.0 - 2.0 * dot(xs[a], xs[b]));
  };
  std::vector<double> closest(n);
  for (std::size_t i = 0; i < n; ++i) closest[i] = sq_dist(i, centers[0]);

  while (centers.size() < k) {
    double total = 0.0;
    for (double d : closest) total += d;
    std::size_t best_candidate = n;
    double best_potential = std::numeric_limits<double>::infinity();
    std::vector<double> best_closest;
    for (std::size_t t = 0; t < trials; ++t) {
      std::size_t candidate;
      if (total > 0.0) {
        candidate = weighted_pick(closest, total, rng);
      } else {
        candidate = 0;
        while (std::find(centers.begin(), centers.end(), candidate) !=
               centers.end()) {
          ++candidate;
        }
      }
      std::vector<double> updated(n);
      double potential = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        updated[i] = std::min(closest[i], sq_dist(i, candidate));
        potential += updated[i];
      }
      if (potential < best_potential) {
        best_potential = potential;
        best_candidate = candidate;
        best_closest = std::move(updated);
      }
    }
    centers.push_back(best_candidate);
    closest = std::move(best_closest);
  }
  return centers;
}

}  // namespace

VideoEmbedding video_embedding(const MetadataStore& store,
                               const EmbeddingIndex& index,
                               std::string_view video_id) {
  const auto video = store.get_video(video_id);
  std::size_t seen = 0;
  const auto mean = mean_direction(index, video, seen);
  if (seen == 0) {
    throw Error(Errc::NoVectors,
                "video '" + std::string(video_id) + "' has no indexed segments");
  }
  if (!mean) {
    throw Error(Errc::DegenerateMean, "video '" + std::string(video_id) +
                                          "' has a zero mean embedding");
  }
  return {std::string(video_id), to_embedding(*mean)};
}

std::vector<VideoEmbedding> all_video_embeddings(const MetadataStore& store,
                                                 const EmbeddingIndex& index) {
  std::vector<VideoEmbedding> out;
  for (const auto& id : store.video_ids()) {
    const auto video = store.find_video(id);
    if (!video) continue;
    std::size_t seen = 0;
    if (const auto mean = mean_direction(index, *video, seen)) {
      out.push_back({id, to_embedding(*mean)});
    }
  }
  return out;
}

ClusteringResult spherical_kmeans(std::span<const VideoEmbedding> points,
                                  std::size_t k, std::uint64_t seed,
                                  const KMeansOptions& options) {
  const std::size_t n = points.size();
  if (k == 0 || k > n) {
    throw Error(Errc::TooFewVideos,
                "cannot form " + std::to_string(k) + " clusters from " +
                    std::to_string(n) + " videos");
  }
  std::vector<Point> xs;
  xs.reserve(n);
  for (const auto& p : points) {
    xs.emplace_back(p.vector.values().begin(), p.vector.values().end());
  }

  DeterministicRng rng(seed);
  std::vector<Point> centroids;
  for (std::size_t c : seed_centers(xs, k, rng)) centroids.push_back(xs[c]);

  ClusteringResult result;
  std::vector<std::size_t> assign(n, 0);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    std::vector<double> sim(n);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_sim = dot(xs[i], centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double s = dot(xs[i], centroids[c]);
        if (s > best_sim) {
          best_sim = s;
          best = c;
        }
      }
      assign[i] = best;
      sim[i] = best_sim;
      ++sizes[best];
    }
    // Repair empty clusters by splitting off the worst-fitting member of the
    // largest cluster.
    for (std::size_t e = 0; e < k; ++e) {
      if (sizes[e] != 0) continue;
      const std::size_t largest = static_cast<std::size_t>(
          std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      std::size_t worst = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] == largest && (worst == n || sim[i] < sim[worst])) {
          worst = i;
        }
      }
      assign[worst] = e;
      sim[worst] = 1.0;
      centroids[e] = xs[worst];
      --sizes[largest];
      ++sizes[e];
    }

    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) objective += 1.0 - sim[i];
    result.objective_history.push_back(objective);
    result.iterations = iter + 1;

    double movement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      Point sum(xs[0].size(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] != c) continue;
        for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += xs[i][d];
      }
      if (!normalize_in_place(sum)) continue;  // members cancel out; keep old
      double shift = 0.0;
      for (std::size_t d = 0; d < sum.size(); ++d) {
        const double delta = sum[d] - centroids[c][d];
        shift += delta * delta;
      }
      movement = std::max(movement, std::sqrt(shift));
      centroids[c] = std::move(sum);
    }
    if (movement < options.tolerance) {
      result.converged = true;
      break;
    }
  }

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < n; ++i) members[assign[i]].push_back(i);
  for (auto& m : members) {
    std::sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) {
      return points[a].video_id < points[b].video_id;
    });
  }
  std::sort(members.begin(), members.end(),
            [&](const auto& a, const auto& b) {
              return points[a.front()].video_id < points[b.front()].video_id;
            });

  for (std::size_t c = 0; c < k; ++c) {
    Cluster cluster;
    cluster.cluster_id = "c" + std::to_string(c);
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i : members[c]) {
      cluster.member_video_ids.push_back(points[i].video_id);
      double cost = 0.0;
      for (std::size_t j : members[c]) cost += 1.0 - dot(xs[i], xs[j]);
      if (cost < best_cost - kMedoidTieEps) {  // members are id-sorted: ties keep the smaller id
        best_cost = cost;
        cluster.medoid_video_id = points[i].video_id;
      }
    }
    result.clusters.push_back(std::move(cluster));
  }
  return result;
}

ClusteringResult cluster_videos(const MetadataStore& store,
                                const EmbeddingIndex& index, std::size_t k,
                                std::uint64_t seed,
                                const KMeansOptions& options) {
  const auto points = all_video_embeddings(store, index);
  return spherical_kmeans(points, k, seed, options);
}

std::size_t default_cluster_count(std::size_t videos) noexcept {
  const auto k = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(videos) / 2.0)));
  return std::max<std::size_t>(1, k);
}

void store_clusters(MetadataStore& store, const ClusteringResult& result,
                    std::size_t k, std::uint64_t seed,
                    const std::string& index_name) {
  json clusters = json::array();
  for (const auto& c : result.clusters) {
    clusters.push_back({{"clusterId", c.cluster_id},
                        {"medoidVideoId", c.medoid_video_id},
                        {"memberVideoIds", c.member_video_ids}});
  }
  store.put_document(std::string(kClustersDocumentKey),
                     json{{"k", k},
                          {"seed", seed},
                          {"index", index_name},
                          {"iterations", result.iterations},
                          {"converged", result.converged},
                          {"objective", result.objective_history},
                          {"clusters", std::move(clusters)}});
}

std::optional<std::vector<Cluster>> load_clusters(const MetadataStore& store) {
  const auto doc = store.get_document(kClustersDocumentKey);
  if (!doc) return std::nullopt;
  std::vector<Cluster> out;
  for (const auto& c : doc->at("clusters")) {
    out.push_back({c.at("clusterId").get<std::string>(),
                   c.at("memberVideoIds").get<std::vector<std::string>>(),
                   c.at("medoidVideoId").get<std::string>()});
  }
  return out;
}

Summary summarize(const MetadataStore& store, const EmbeddingIndex& index,
                  std::string_view video_id, std::size_t n) {
  if (n == 0) throw Error(Errc::InvalidRequest, "summary size must be >= 1");
  const auto video = store.get_video(video_id);
  std::vector<const SegmentDoc*> segments;
  std::vector<Point> vectors;
  for (const auto& s : video.segments) {
    if (!index.contains(s.segment_id)) continue;
    const auto v = index.vector_of(s.segment_id);
    segments.push_back(&s);
    vectors.emplace_back(v.values().begin(), v.values().end());
  }
  const std::size_t m = segments.size();
  if (m == 0) {
    throw Error(Errc::NoVectors,
                "video '" + std::string(video_id) + "' has no indexed segments");
  }
  const std::size_t chunks = std::min(n, m);
  Summary summary;
  summary.video_id = std::string(video_id);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * m / chunks;
    const std::size_t end = (c + 1) * m / chunks;
    std::size_t best = begin;
    double best_sum = -std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) {
      double total = 0.0;
      for (std::size_t j = begin; j < end; ++j) total += dot(vectors[i], vectors[j]);
      // Near-equal sums are ties; the earliest segment keeps the slot.
      if (total > best_sum + kMedoidTieEps) {
        best_sum = total;
        best = i;
      }
    }
    summary.frames.push_back({segments[best]->segment_id,
                              segments[best]->keyframe_ref,
                              segments[best]->start_ms});
  }
  return summary;
}

}  // namespace vidseek
