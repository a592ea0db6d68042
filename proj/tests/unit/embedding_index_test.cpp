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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include <memory>

#include "oracles.hpp"
#include "vidseek/embedding_index.hpp"
#include "vidseek/error.hpp"
#include "vidseek/hashing.hpp"

namespace vidseek {
namespace {

std::vector<float> random_vector(DeterministicRng& rng, std::size_t dim) {
  std::vector<float> v(dim);
  for (auto& x : v) x = static_cast<float>(rng.normal());
  return v;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::InternalError;
}

TEST(Normalize, ThreeFourFive) {
  const auto v = EmbeddingVector::normalize(std::vector<float>{3.0f, 4.0f});
  ASSERT_EQ(v.dim(), 2u);
  EXPECT_FLOAT_EQ(v.values()[0], 0.6f);
  EXPECT_FLOAT_EQ(v.values()[1], 0.8f);
}

TEST(Normalize, AlreadyUnit) {
  std::vector<float> raw(16, 0.0f);
  raw[0] = 1.0f;
  const auto v = EmbeddingVector::normalize(raw);
  EXPECT_EQ(std::vector<float>(v.values().begin(), v.values().end()), raw);
}

TEST(Normalize, Random1024HasUnitNorm) {
  DeterministicRng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto raw = random_vector(rng, 1024);
    const auto v = EmbeddingVector::normalize(raw);
    double sq = 0.0;
    for (float x : v.values()) sq += static_cast<double>(x) * x;
    EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-6);
    const auto want = oracle::normalize(raw);
    for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_NEAR(v.values()[i], want[i], 1e-6);
  }
}

TEST(Normalize, ZeroAndTinyVectorsRejected) {
  EXPECT_EQ(code_of([] { EmbeddingVector::normalize(std::vector<float>(8, 0.0f)); }),
            Errc::ZeroVector);
  EXPECT_EQ(code_of([] {
              EmbeddingVector::normalize(std::vector<float>{1e-14f, 0.0f});
            }),
            Errc::ZeroVector);
}

TEST(Normalize, IndexChecksDimension) {
  EmbeddingIndex index(4);
  EXPECT_EQ(code_of([&] { index.normalize(std::vector<float>{1, 2, 3}); }),
            Errc::DimensionMismatch);
}

TEST(Normalize, ScaleInvariant) {
  DeterministicRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto raw = random_vector(rng, 32);
    const auto a = EmbeddingVector::normalize(raw);
    const float c = static_cast<float>(0.001 + rng.uniform() * 1000.0);
    for (auto& x : raw) x *= c;
    const auto b = EmbeddingVector::normalize(raw);
    for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-6);
  }
}

IndexEntry entry(const std::string& seg, const std::string& vid,
                 std::vector<float> raw) {
  return {seg, vid, EmbeddingVector::normalize(raw)};
}

TEST(AddEntries, EmptyBatchIsNoop) {
  EmbeddingIndex index(3);
  EXPECT_EQ(index.add_entries({}), 0u);
  EXPECT_EQ(index.size(), 0u);
}

TEST(AddEntries, ThreeDistinct) {
  EmbeddingIndex index(3);
  EXPECT_EQ(index.add_entries({entry("a", "v", {1, 0, 0}), entry("b", "v", {0, 1, 0}),
                               entry("c", "w", {0, 0, 1})}),
            3u);
  EXPECT_EQ(index.size(), 3u);
  EXPECT_TRUE(index.contains("b"));
}

TEST(AddEntries, DuplicateRejectedAtomically) {
  EmbeddingIndex index(3);
  index.add_entries({entry("a", "v", {1, 0, 0})});
  EXPECT_EQ(code_of([&] {
              index.add_entries({entry("b", "v", {0, 1, 0}), entry("a", "v", {0, 0, 1})});
            }),
            Errc::DuplicateSegment);
  EXPECT_EQ(index.size(), 1u);
  EXPECT_FALSE(index.contains("b"));
  EXPECT_EQ(code_of([&] {
              index.add_entries({entry("x", "v", {0, 1, 0}), entry("x", "v", {0, 0, 1})});
            }),
            Errc::DuplicateSegment);
  EXPECT_EQ(index.size(), 1u);
}

TEST(AddEntries, DimensionMismatch) {
  EmbeddingIndex index(3);
  EXPECT_EQ(code_of([&] { index.add_entries({entry("a", "v", {1, 0})}); }),
            Errc::DimensionMismatch);
  EXPECT_EQ(index.size(), 0u);
}

TEST(Search, SelfSimilarityAndOrthogonality) {
  EmbeddingIndex index(3);
  index.add_entries({entry("a", "v", {1, 0, 0})});
  auto hits = index.search(EmbeddingVector::normalize(std::vector<float>{1, 0, 0}), 5);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].segment_id, "a");
  EXPECT_NEAR(hits[0].score, 1.0, 1e-5);
  hits = index.search(EmbeddingVector::normalize(std::vector<float>{0, 1, 0}), 1);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_NEAR(hits[0].score, 0.0, 1e-6);
}

TEST(Search, EmptyIndexReturnsEmpty) {
  EmbeddingIndex index(2);
  EXPECT_TRUE(index.search(EmbeddingVector::normalize(std::vector<float>{1, 1}), 3).empty());
}

TEST(Search, RejectsZeroKAndWrongDim) {
  EmbeddingIndex index(2);
  index.add_entries({entry("a", "v", {1, 0})});
  const auto q = EmbeddingVector::normalize(std::vector<float>{1, 1});
  EXPECT_EQ(code_of([&] { index.search(q, 0); }), Errc::InvalidRequest);
  EXPECT_EQ(code_of([&] {
              index.search(EmbeddingVector::normalize(std::vector<float>{1, 1, 1}), 1);
            }),
            Errc::DimensionMismatch);
}

TEST(Search, TiesBrokenByVideoThenSegment) {
  EmbeddingIndex index(2);
  index.add_entries({entry("s2", "vb", {1, 0}), entry("s3", "va", {1, 0}),
                     entry("s1", "vb", {1, 0}), entry("s0", "vc", {0, 1})});
  const auto hits = index.search(EmbeddingVector::normalize(std::vector<float>{1, 0}), 4);
  ASSERT_EQ(hits.size(), 4u);
  EXPECT_EQ(hits[0].segment_id, "s3");
  EXPECT_EQ(hits[1].segment_id, "s1");
  EXPECT_EQ(hits[2].segment_id, "s2");
  EXPECT_EQ(hits[3].segment_id, "s0");
}

struct RandomCorpus {
  EmbeddingIndex index;
  std::vector<oracle::Row> rows;
};

std::unique_ptr<RandomCorpus> random_corpus(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::unique_ptr<RandomCorpus> c(new RandomCorpus{EmbeddingIndex(dim), {}});
  DeterministicRng rng(seed);
  std::vector<IndexEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    const auto raw = random_vector(rng, dim);
    const std::string vid = "v" + std::to_string(i % 37);
    const std::string seg = "s" + std::to_string(i);
    auto vec = EmbeddingVector::normalize(raw);
    oracle::Row row{seg, vid, {}};
    for (float x : vec.values()) row.unit.push_back(x);
    c->rows.push_back(std::move(row));
    entries.push_back({seg, vid, std::move(vec)});
  }
  c->index.add_entries(std::move(entries));
  return c;
}

TEST(Search, MatchesBruteForceOracle) {
  auto corpus = random_corpus(2000, 48, 3);
  DeterministicRng rng(99);
  for (int q = 0; q < 25; ++q) {
    const auto query = EmbeddingVector::normalize(random_vector(rng, 48));
    const std::vector<double> qd(query.values().begin(), query.values().end());
    const auto want = oracle::knn(corpus->rows, qd, 50);
    const auto got = corpus->index.search(query, 50);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].segment_id, want[i].segment_id) << "rank " << i;
      EXPECT_NEAR(got[i].score, want[i].score, 1e-5);
      EXPECT_LE(std::abs(got[i].score), 1.0 + 1e-6);
    }
  }
}

TEST(Search, TopJIsPrefixOfTopK) {
  auto corpus = random_corpus(500, 16, 5);
  DeterministicRng rng(1);
  const auto query = EmbeddingVector::normalize(random_vector(rng, 16));
  const auto full = corpus->index.search(query, 100);
  for (std::size_t j : {1u, 2u, 7u, 50u, 99u}) {
    const auto prefix = corpus->index.search(query, j);
    ASSERT_EQ(prefix.size(), j);
    for (std::size_t i = 0; i < j; ++i) EXPECT_EQ(prefix[i].segment_id, full[i].segment_id);
  }
}

TEST(Search, KLargerThanSize) {
  auto corpus = random_corpus(10, 8, 2);
  DeterministicRng rng(4);
  EXPECT_EQ(corpus->index.search(EmbeddingVector::normalize(random_vector(rng, 8)), 500).size(),
            10u);
}

TEST(VectorOf, RoundTripAndSelfSearch) {
  auto corpus = random_corpus(300, 24, 8);
  for (const auto& row : corpus->rows) {
    const auto v = corpus->index.vector_of(row.segment_id);
    for (std::size_t i = 0; i < row.unit.size(); ++i) {
      EXPECT_EQ(static_cast<double>(v.values()[i]), row.unit[i]);
    }
    const auto hits = corpus->index.search(v, 1);
    EXPECT_EQ(hits[0].segment_id, row.segment_id);
    EXPECT_NEAR(hits[0].score, 1.0, 1e-5);
  }
  EXPECT_EQ(code_of([&] { corpus->index.vector_of("nope"); }), Errc::UnknownSegment);
}

TEST(IndexRegistry, CreateGetAndErrors) {
  IndexRegistry reg;
  EXPECT_TRUE(reg.empty());
  auto a = reg.create("main", 8);
  EXPECT_EQ(reg.create("main", 8), a);
  EXPECT_EQ(code_of([&] { reg.create("main", 16); }), Errc::DimensionMismatch);
  reg.create("alt", 4);
  EXPECT_EQ(reg.names(), (std::vector<std::string>{"alt", "main"}));
  EXPECT_EQ(reg.find("missing"), nullptr);
  EXPECT_EQ(code_of([&] { reg.get("missing"); }), Errc::IndexUnavailable);
}

}  // namespace
}  // namespace vidseek
