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

#include <gtest/gtest.h>

#include "fixture_catalog.hpp"
#include "oracles.hpp"
#include "vidseek/error.hpp"
#include "vidseek/hashing.hpp"

namespace vidseek {
namespace {

Errc error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InternalError;
}

// Store + index built from raw vectors: videos[v][s] is segment s of video v.
struct Hand {
  MetadataStore store;
  EmbeddingIndex index;

  explicit Hand(const std::vector<std::vector<std::vector<float>>>& videos)
      : index(videos.at(0).at(0).size()) {
    std::vector<IndexEntry> entries;
    for (std::size_t v = 0; v < videos.size(); ++v) {
      const std::string vid = "v" + std::to_string(v);
      VideoDoc doc{vid, "", static_cast<std::int64_t>(videos[v].size()) * 1000, Dataset::V, {}};
      std::vector<SegmentDoc> segs;
      for (std::size_t s = 0; s < videos[v].size(); ++s) {
        const std::string sid = vid + "_" + std::to_string(100 + s);
        segs.push_back({sid, vid, static_cast<std::int64_t>(s) * 1000,
                        static_cast<std::int64_t>(s + 1) * 1000, "kf/" + sid + ".jpg", {}});
        doc.segment_ids.push_back(sid);
        entries.push_back({sid, vid, EmbeddingVector::normalize(videos[v][s])});
      }
      store.upsert_video(doc, segs);
    }
    index.add_entries(std::move(entries));
  }
};

std::vector<float> random_raw(DeterministicRng& rng, std::size_t dim) {
  std::vector<float> raw(dim);
  for (auto& x : raw) x = static_cast<float>(rng.normal());
  return raw;
}

TEST(VideoEmbedding, SingleSegmentIsItsVector) {
  Hand h({{{3, 4}}});
  const auto e = video_embedding(h.store, h.index, "v0");
  EXPECT_EQ(e.video_id, "v0");
  EXPECT_FLOAT_EQ(e.vector.values()[0], 0.6f);
  EXPECT_FLOAT_EQ(e.vector.values()[1], 0.8f);
}

TEST(VideoEmbedding, MeanMatchesOracle) {
  DeterministicRng rng(4);
  std::vector<std::vector<float>> segs;
  for (int i = 0; i < 9; ++i) segs.push_back(random_raw(rng, 12));
  Hand h({segs});
  std::vector<std::vector<double>> units;
  for (const auto& s : segs) units.push_back(oracle::normalize(s));
  const auto want = oracle::mean_direction(units);
  const auto got = video_embedding(h.store, h.index, "v0");
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got.vector.values()[i], want[i], 1e-5);
}

TEST(VideoEmbedding, Errors) {
  Hand h({{{1, 0}, {-1, 0}}});
  EXPECT_EQ(error_of([&] { video_embedding(h.store, h.index, "v0"); }), Errc::DegenerateMean);
  EXPECT_EQ(error_of([&] { video_embedding(h.store, h.index, "zz"); }), Errc::UnknownVideo);
  EXPECT_TRUE(all_video_embeddings(h.store, h.index).empty());

  MetadataStore store;
  store.upsert_video({"bare", "", 1000, Dataset::V, {"bare_0"}},
                     {{"bare_0", "bare", 0, 1000, "", {}}});
  EmbeddingIndex index(2);
  EXPECT_EQ(error_of([&] { video_embedding(store, index, "bare"); }), Errc::NoVectors);
}

TEST(KMeans, KEqualsNGivesSingletons) {
  DeterministicRng rng(5);
  std::vector<std::vector<std::vector<float>>> videos;
  for (int v = 0; v < 6; ++v) videos.push_back({random_raw(rng, 8)});
  Hand h(videos);
  const auto r = cluster_videos(h.store, h.index, 6, 1);
  ASSERT_EQ(r.clusters.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(r.clusters[i].cluster_id, "c" + std::to_string(i));
    ASSERT_EQ(r.clusters[i].member_video_ids.size(), 1u);
    EXPECT_EQ(r.clusters[i].member_video_ids[0], "v" + std::to_string(i));
    EXPECT_EQ(r.clusters[i].medoid_video_id, r.clusters[i].member_video_ids[0]);
  }
}

TEST(KMeans, TooFewVideos) {
  Hand h({{{1, 0}}, {{0, 1}}});
  EXPECT_EQ(error_of([&] { cluster_videos(h.store, h.index, 3, 1); }), Errc::TooFewVideos);
  EXPECT_EQ(error_of([&] { cluster_videos(h.store, h.index, 0, 1); }), Errc::TooFewVideos);
}

TEST(KMeans, SingleClusterHoldsEverything) {
  Hand h({{{1, 0}}, {{0.9f, 0.1f}}, {{1, 0.3f}}});
  const auto r = cluster_videos(h.store, h.index, 1, 3);
  ASSERT_EQ(r.clusters.size(), 1u);
  EXPECT_EQ(r.clusters[0].member_video_ids, (std::vector<std::string>{"v0", "v1", "v2"}));
  // v1 lies between the others: smallest summed cosine distance.
  EXPECT_EQ(r.clusters[0].medoid_video_id, "v1");
}

TEST(KMeans, RecoversPlantedGroupsAndObjectiveNeverRises) {
  auto fc = testing::make_fixture_catalog(
      {.seed = 11, .videos = 16, .segments_per_video = 10, .dim = 32, .groups = 2});
  const auto index = fc->catalog->indexes.get("main");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = cluster_videos(fc->catalog->store, *index, 2, seed);
    ASSERT_EQ(r.clusters.size(), 2u);
    for (const auto& c : r.clusters) {
      std::set<std::size_t> groups;
      for (const auto& v : c.member_video_ids) groups.insert(fc->info.group_of.at(v));
      EXPECT_EQ(groups.size(), 1u) << "seed " << seed;
    }
    ASSERT_FALSE(r.objective_history.empty());
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      EXPECT_LE(r.objective_history[i], r.objective_history[i - 1] + 1e-9);
    }
    EXPECT_LE(r.iterations, KMeansOptions{}.max_iterations);
  }
}

TEST(KMeans, SameSeedSameResult) {
  auto fc = testing::make_fixture_catalog({.seed = 3, .videos = 12, .segments_per_video = 4, .dim = 16});
  const auto index = fc->catalog->indexes.get("main");
  const auto a = cluster_videos(fc->catalog->store, *index, 3, 99);
  const auto b = cluster_videos(fc->catalog->store, *index, 3, 99);
  EXPECT_EQ(a.clusters, b.clusters);
  EXPECT_EQ(a.objective_history, b.objective_history);
}

TEST(KMeans, DefaultClusterCount) {
  EXPECT_EQ(default_cluster_count(0), 1u);
  EXPECT_EQ(default_cluster_count(1), 1u);
  EXPECT_EQ(default_cluster_count(2), 1u);
  EXPECT_EQ(default_cluster_count(3), 2u);
  EXPECT_EQ(default_cluster_count(50), 5u);
  EXPECT_EQ(default_cluster_count(51), 6u);
}

TEST(Clusters, PersistInStore) {
  Hand h({{{1, 0}}, {{0, 1}}, {{1, 0.1f}}});
  EXPECT_FALSE(load_clusters(h.store));
  const auto r = cluster_videos(h.store, h.index, 2, 4);
  store_clusters(h.store, r, 2, 4, "main");
  const auto back = load_clusters(h.store);
  ASSERT_TRUE(back);
  EXPECT_EQ(*back, r.clusters);
  std::istringstream in(h.store.dump());
  MetadataStore copy;
  copy.load(in);
  EXPECT_EQ(load_clusters(copy), back);
}

TEST(Summary, MatchesChunkMedoidOracle) {
  DeterministicRng rng(21);
  for (std::size_t m : {1, 7, 25, 26, 60}) {
    std::vector<std::vector<float>> segs;
    for (std::size_t i = 0; i < m; ++i) segs.push_back(random_raw(rng, 10));
    Hand h({segs});
    std::vector<std::vector<double>> units;
    for (const auto& s : segs) units.push_back(oracle::normalize(s));
    for (std::size_t n : {1, 3, 25}) {
      const auto got = summarize(h.store, h.index, "v0", n);
      const auto want = oracle::chunk_medoids(units, n);
      ASSERT_EQ(got.frames.size(), want.size()) << m << "/" << n;
      EXPECT_LE(got.frames.size(), n);
      for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_EQ(got.frames[i].segment_id, "v0_" + std::to_string(100 + want[i]));
        EXPECT_EQ(got.frames[i].start_ms, static_cast<std::int64_t>(want[i]) * 1000);
        EXPECT_EQ(got.frames[i].keyframe_ref, "kf/" + got.frames[i].segment_id + ".jpg");
        if (i > 0) EXPECT_LT(got.frames[i - 1].start_ms, got.frames[i].start_ms);
      }
    }
  }
}

TEST(Summary, Errors) {
  Hand h({{{1, 0}}});
  EXPECT_EQ(error_of([&] { summarize(h.store, h.index, "v0", 0); }), Errc::InvalidRequest);
  EXPECT_EQ(error_of([&] { summarize(h.store, h.index, "v9"); }), Errc::UnknownVideo);
}

}  // namespace
}  // namespace vidseek
