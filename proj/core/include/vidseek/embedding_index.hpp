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

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vidseek {

inline constexpr std::size_t kDefaultEmbeddingDim = 1024;

/// Unit-norm float vector. Only constructible through normalization, so every
/// instance satisfies |v| = 1 within float rounding.
class EmbeddingVector {
 public:
  /// Scales `raw` to unit length. Throws Error(ZeroVector) when |raw| < 1e-12.
  static EmbeddingVector normalize(std::span<const float> raw);

  /// Wraps values that are already unit length (e.g. loaded from disk);
  /// throws Error(InvariantViolation) when the norm is off by more than 1e-4.
  static EmbeddingVector from_unit(std::vector<float> values);

  std::span<const float> values() const noexcept { return values_; }
  std::size_t dim() const noexcept { return values_.size(); }

  friend bool operator==(const EmbeddingVector&,
                         const EmbeddingVector&) = default;

 private:
  explicit EmbeddingVector(std::vector<float> values)
      : values_(std::move(values)) {}

  std::vector<float> values_;
};

double dot(std::span<const float> a, std::span<const float> b) noexcept;

struct IndexEntry {
  std::string segment_id;
  std::string video_id;
  EmbeddingVector vector;
};

struct SearchHit {
  std::string segment_id;
  std::string video_id;
  double score = 0.0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Exact inner-product index over unit vectors. Searches take a shared lock
/// and may run concurrently; add_entries takes the exclusive lock.
class EmbeddingIndex {
 public:
  explicit EmbeddingIndex(std::size_t dim = kDefaultEmbeddingDim);

  EmbeddingIndex(const EmbeddingIndex&) = delete;
  EmbeddingIndex& operator=(const EmbeddingIndex&) = delete;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const;

  /// normalize() plus the dimension check against this index.
  EmbeddingVector normalize(std::span<const float> raw) const;

  /// All-or-nothing: on DuplicateSegment or DimensionMismatch nothing is added.
  std::size_t add_entries(std::vector<IndexEntry> entries);

  /// Top-k by inner product, ordered by (score desc, videoId asc,
  /// segmentId asc). Returns min(k, size()) hits; an empty index yields an
  /// empty list.
  std::vector<SearchHit> search(const EmbeddingVector& query,
                                std::size_t k) const;

  EmbeddingVector vector_of(std::string_view segment_id) const;
  bool contains(std::string_view segment_id) const;

  /// Visits rows in insertion order under the shared lock.
  void for_each(const std::function<void(const std::string& segment_id,
                                         const std::string& video_id,
                                         std::span<const float> values)>& fn)
      const;

 private:
  std::size_t dim_;
  mutable std::shared_mutex mutex_;
  std::vector<float> matrix_;  // row-major, size() x dim_
  std::vector<std::string> segment_ids_;
  std::vector<std::string> video_ids_;
  std::unordered_map<std::string, std::size_t> row_of_;
};

/// Named indexes; a query may fan out to several of them.
class IndexRegistry {
 public:
  /// Returns the existing index when `name` is known and dims agree; throws
  /// Error(DimensionMismatch) when they do not.
  std::shared_ptr<EmbeddingIndex> create(const std::string& name,
                                         std::size_t dim);

  /// Throws Error(IndexUnavailable).
  std::shared_ptr<EmbeddingIndex> get(std::string_view name) const;
  std::shared_ptr<EmbeddingIndex> find(std::string_view name) const;

  std::vector<std::string> names() const;
  bool empty() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<EmbeddingIndex>, std::less<>> indexes_;
};

}  // namespace vidseek
