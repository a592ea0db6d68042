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

#include "vidseek/embedding_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>

#include "vidseek/error.hpp"

namespace vidseek {

EmbeddingVector EmbeddingVector::normalize(std::span<const float> raw) {
  double norm2 = 0.0;
  for (float x : raw) norm2 += static_cast<double>(x) * x;
  const double norm = std::sqrt(norm2);
  if (!(norm >= 1e-12)) {
    throw Error(Errc::ZeroVector, "cannot normalize a zero vector");
  }
  std::vector<float> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = static_cast<float>(raw[i] / norm);
  }
  return EmbeddingVector(std::move(out));
}

EmbeddingVector EmbeddingVector::from_unit(std::vector<float> values) {
  double norm2 = 0.0;
  for (float x : values) norm2 += static_cast<double>(x) * x;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-4) {
    throw Error(Errc::InvariantViolation, "vector is not unit length");
  }
  return EmbeddingVector(std::move(values));
}

double dot(std::span<const float> a, std::span<const float> b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += static_cast<double>(a[i]) * b[i];
    s1 += static_cast<double>(a[i + 1]) * b[i + 1];
    s2 += static_cast<double>(a[i + 2]) * b[i + 2];
    s3 += static_cast<double>(a[i + 3]) * b[i + 3];
  }
  for (; i < n; ++i) s0 += static_cast<double>(a[i]) * b[i];
  return (s0 + s1) + (s2 + s3);
}

EmbeddingIndex::EmbeddingIndex(std::size_t dim) : dim_(dim) {
  if (dim == 0) {
    throw Error(Errc::DimensionMismatch, "index dimension must be positive");
  }
}

std::size_t EmbeddingIndex::size() const {
  std::shared_lock lock(mutex_);
  return segment_ids_.size();
}

EmbeddingVector EmbeddingIndex::normalize(std::span<const float> raw) const {
  if (raw.size() != dim_) {
    throw Error(Errc::DimensionMismatch,
                "expected dimension " + std::to_string(dim_) + ", got " +
                    std::to_string(raw.size()));
  }
  return EmbeddingVector::normalize(raw);
}

std::size_t EmbeddingIndex::add_entries(std::vector<IndexEntry> entries) {
  std::unique_lock lock(mutex_);
  std::unordered_set<std::string_view> batch;
  for (const auto& e : entries) {
    if (e.vector.dim() != dim_) {
      throw Error(Errc::DimensionMismatch,
                  "segment '" + e.segment_id + "' has dimension " +
                      std::to_string(e.vector.dim()) + ", index expects " +
                      std::to_string(dim_));
    }
    if (row_of_.count(e.segment_id) != 0 || !batch.insert(e.segment_id).second) {
      throw Error(Errc::DuplicateSegment,
                  "segment '" + e.segment_id + "' is already indexed");
    }
  }
  matrix_.reserve(matrix_.size() + entries.size() * dim_);
  for (auto& e : entries) {
    const auto values = e.vector.values();
    matrix_.insert(matrix_.end(), values.begin(), values.end());
    row_of_.emplace(e.segment_id, segment_ids_.size());
    segment_ids_.push_back(std::move(e.segment_id));
    video_ids_.push_back(std::move(e.video_id));
  }
  return entries.size();
}

std::vector<SearchHit> EmbeddingIndex::search(const EmbeddingVector& query,
                                              std::size_t k) const {
  if (query.dim() != dim_) {
    throw Error(Errc::DimensionMismatch,
                "query has dimension " + std::to_string(query.dim()) +
                    ", index expects " + std::to_string(dim_));
  }
  if (k == 0) {
    throw Error(Errc::InvalidRequest, "k must be at least 1");
  }
  std::shared_lock lock(mutex_);
  const std::size_t n = segment_ids_.size();
  if (n == 0) return {};

  struct Scored {
    double score;
    std::uint32_t row;
  };
  std::vector<Scored> scored(n);
  const std::span<const float> q = query.values();
  for (std::size_t r = 0; r < n; ++r) {
    scored[r] = {dot(q, std::span<const float>(matrix_.data() + r * dim_, dim_)),
                 static_cast<std::uint32_t>(r)};
  }
  const auto better = [this](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (video_ids_[a.row] != video_ids_[b.row]) {
      return video_ids_[a.row] < video_ids_[b.row];
    }
    return segment_ids_[a.row] < segment_ids_[b.row];
  };
  const std::size_t take = std::min(k, n);
  if (take < n) {
    std::nth_element(scored.begin(), scored.begin() + take, scored.end(),
                     better);
  }
  std::sort(scored.begin(), scored.begin() + take, better);

  std::vector<SearchHit> hits;
  hits.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const auto row = scored[i].row;
    hits.push_back({segment_ids_[row], video_ids_[row], scored[i].score});
  }
  return hits;
}

EmbeddingVector EmbeddingIndex::vector_of(std::string_view segment_id) const {
  std::shared_lock lock(mutex_);
  const auto it = row_of_.find(std::string(segment_id));
  if (it == row_of_.end()) {
    throw Error(Errc::UnknownSegment,
                "segment '" + std::string(segment_id) + "' is not indexed");
  }
  const float* row = matrix_.data() + it->second * dim_;
  return EmbeddingVector::from_unit(std::vector<float>(row, row + dim_));
}

bool EmbeddingIndex::contains(std::string_view segment_id) const {
  std::shared_lock lock(mutex_);
  return row_of_.count(std::string(segment_id)) != 0;
}

void EmbeddingIndex::for_each(
    const std::function<void(const std::string&, const std::string&,
                             std::span<const float>)>& fn) const {
  std::shared_lock lock(mutex_);
  for (std::size_t r = 0; r < segment_ids_.size(); ++r) {
    fn(segment_ids_[r], video_ids_[r],
       std::span<const float>(matrix_.data() + r * dim_, dim_));
  }
}

std::shared_ptr<EmbeddingIndex> IndexRegistry::create(const std::string& name,
                                                      std::size_t dim) {
  std::lock_guard lock(mutex_);
  if (auto it = indexes_.find(name); it != indexes_.end()) {
    if (it->second->dim() != dim) {
      throw Error(Errc::DimensionMismatch,
                  "index '" + name + "' has dimension " +
                      std::to_string(it->second->dim()) + ", requested " +
                      std::to_string(dim));
    }
    return it->second;
  }
  auto index = std::make_shared<EmbeddingIndex>(dim);
  indexes_.emplace(name, index);
  return index;
}

std::shared_ptr<EmbeddingIndex> IndexRegistry::get(std::string_view name) const {
  if (auto index = find(name)) return index;
  throw Error(Errc::IndexUnavailable,
              "index '" + std::string(name) + "' is not available");
}

std::shared_ptr<EmbeddingIndex> IndexRegistry::find(std::string_view name) const {
  std::lock_guard lock(mutex_);
  const auto it = indexes_.find(name);
  return it == indexes_.end() ? nullptr : it->second;
}

std::vector<std::string> IndexRegistry::names() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, _] : indexes_) out.push_back(name);
  return out;
}

bool IndexRegistry::empty() const {
  std::lock_guard lock(mutex_);
  return indexes_.empty();
}

}  // namespace vidseek
