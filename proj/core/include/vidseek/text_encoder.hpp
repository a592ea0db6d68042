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
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vidseek/embedding_index.hpp"

namespace vidseek {

/// Maps query text into the embedding space of an index. Real deployments
/// plug in the text tower of the model that produced the keyframe
/// embeddings; implementations must be safe for concurrent encode() calls.
class TextEncoder {
 public:
  virtual ~TextEncoder() = default;
  virtual EmbeddingVector encode(std::string_view text, std::size_t dim) const = 0;
};

/// Deterministic bag-of-tokens encoder: every lower-cased alphanumeric token
/// owns a pseudo-random unit direction seeded from its hash, and a text is the
/// normalized sum of its token directions. The synthetic fixture builds its
/// content clusters around these directions, so theme words retrieve their
/// cluster without any model.
class HashedTokenEncoder final : public TextEncoder {
 public:
  explicit HashedTokenEncoder(std::uint64_t seed = kDefaultSeed) : seed_(seed) {}

  EmbeddingVector encode(std::string_view text, std::size_t dim) const override;

  /// Unit direction for one (already folded) token.
  std::vector<float> token_direction(std::string_view token,
                                     std::size_t dim) const;

  static std::vector<std::string> tokenize(std::string_view text);

  static constexpr std::uint64_t kDefaultSeed = 0x5eed'0f'7e47ULL;

 private:
  std::uint64_t seed_;
};

/// Exact-text lookup of precomputed query embeddings (JSON-lines records
/// {"text": ..., "vector": [...]}) with a fallback encoder for misses.
class LookupTextEncoder final : public TextEncoder {
 public:
  explicit LookupTextEncoder(std::unique_ptr<TextEncoder> fallback);

  void add(std::string text, std::vector<float> raw);
  /// Returns the number of records read.
  std::size_t load_jsonl(const std::filesystem::path& path);
  std::size_t size() const noexcept { return table_.size(); }

  EmbeddingVector encode(std::string_view text, std::size_t dim) const override;

 private:
  std::map<std::pair<std::string, std::size_t>, EmbeddingVector> table_;
  std::unique_ptr<TextEncoder> fallback_;
};

}  // namespace vidseek
