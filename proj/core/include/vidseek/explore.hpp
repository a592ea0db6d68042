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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vidseek/embedding_index.hpp"
#include "vidseek/metadata_store.hpp"

namespace vidseek {

struct VideoEmbedding {
  std::string video_id;
  EmbeddingVector vector;
};

/// normalize(mean of the video's indexed segment vectors).
/// Errors: UnknownVideo, NoVectors, DegenerateMean (mean is ~zero).
VideoEmbedding video_embedding(const MetadataStore& store,
                               const EmbeddingIndex& index,
                               std::string_view video_id);

/// Embeddings for every stored video that has at least one indexed segment
/// and a non-degenerate mean, in videoId order.
std::vector<VideoEmbedding> all_video_embeddings(const MetadataStore& store,
                                                 const EmbeddingIndex& index);

struct Cluster {
  std::string cluster_id;
  std::vector<std::string> member_video_ids;  // sorted
  std::string medoid_video_id;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct KMeansOptions {
  std::size_t max_iterations = 100;
  double tolerance = 1e-6;  // max centroid movement (L2) to stop
};

struct ClusteringResult {
  std::vector<Cluster> clusters;
  /// Sum of cosine distances to assigned centroids, one per iteration,
  /// measured after the assignment step.
  std::vector<double> objective_history;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Spherical k-means with greedy k-means++ seeding. Clusters are ordered by
/// their smallest member id and labeled c0, c1, ... Throws
/// Error(TooFewVideos) when k is 0 or exceeds the number of points.
ClusteringResult spherical_kmeans(std::span<const VideoEmbedding> points,
                                  std::size_t k, std::uint64_t seed,
                                  const KMeansOptions& options = {});

ClusteringResult cluster_videos(const MetadataStore& store,
                                const EmbeddingIndex& index, std::size_t k,
                                std::uint64_t seed,
                                const KMeansOptions& options = {});

/// ceil(sqrt(videos / 2)), at least 1.
std::size_t default_cluster_count(std::size_t videos) noexcept;

inline constexpr std::string_view kClustersDocumentKey = "explore.clusters";

void store_clusters(MetadataStore& store, const ClusteringResult& result,
                    std::size_t k, std::uint64_t seed,
                    const std::string& index_name);
/// nullopt until store_clusters ran.
std::optional<std::vector<Cluster>> load_clusters(const MetadataStore& store);

inline constexpr std::size_t kDefaultSummarySize = 25;

struct SummaryFrame {
  std::string segment_id;
  std::string keyframe_ref;
  std::int64_t start_ms = 0;
};

struct Summary {
  std::string video_id;
  std::vector<SummaryFrame> frames;  // temporal order
};

/// Splits the video's indexed segments into min(n, m) contiguous chunks and
/// keeps each chunk's medoid (maximal summed similarity to the chunk, earliest
/// on ties). Errors: UnknownVideo, NoVectors, InvalidRequest (n == 0).
Summary summarize(const MetadataStore& store, const EmbeddingIndex& index,
                  std::string_view video_id,
                  std::size_t n = kDefaultSummarySize);

}  // namespace vidseek
