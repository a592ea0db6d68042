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

// Randomized oracle comparisons shared by the unit tests (small counts) and
// the acceptance binary (full counts). Each returns a description of the
// first mismatch, or nullopt.

#include <cstdint>
#include <optional>
#include <string>

namespace vidseek::check {

using Mismatch = std::optional<std::string>;

/// n random unit vectors, `queries` random queries, top-k vs brute force:
/// scores within 1e-5 per rank and identical id lists. With
/// `allow_tie_swaps`, ids may differ between ranks whose oracle scores are
/// within 1e-5.
Mismatch knn_oracle(std::size_t n, std::size_t dim, std::size_t queries,
                    std::size_t k, std::uint64_t seed, bool allow_tie_swaps = false);

/// One random ast -> render -> parse round trip.
Mismatch render_round_trip(std::uint64_t seed);

/// Random temporal-merge instance (<= 5 videos, <= 20 segments per video,
/// 2-3 stages, random window) against exhaustive enumeration.
Mismatch temporal_instance(std::uint64_t seed);

/// Random list family: rrf permutation invariance and rank-1 dominance.
Mismatch rrf_family(std::uint64_t seed);

/// Random hits and allowed set against the filter oracle.
Mismatch filter_case(std::uint64_t seed);

}  // namespace vidseek::check
