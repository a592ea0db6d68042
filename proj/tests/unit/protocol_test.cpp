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

#include "vidseek/protocol.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fixture_catalog.hpp"
#include "hand_catalog.hpp"
#include "stub_eval_server.hpp"
#include "vidseek/error.hpp"

namespace vidseek {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json request(const std::string& id, const std::string& kind, json payload = json::object()) {
  return {{"v", 1}, {"requestId", id}, {"kind", kind}, {"payload", std::move(payload)}};
}

std::string code_of(const json& response) { return response.at("error").at("code"); }

struct Hand {
  std::unique_ptr<Catalog> catalog = testing::make_hand_catalog();
  HashedTokenEncoder encoder;
  Dispatcher dispatcher{*catalog, encoder, nullptr};
};

TEST(ProtocolGolden, FramesMatchByteForByte) {
  Hand h;
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(VIDSEEK_TEST_FIXTURES) / "protocol")) {
    std::ifstream in(entry.path());
    // '#' lines are the license header.
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
      if (!line.starts_with('#')) lines.push_back(line);
    }
    ASSERT_GE(lines.size(), 2u) << entry.path();
    const std::string& req = lines[0];
    const std::string& want = lines[1];
    EXPECT_EQ(h.dispatcher.handle(req), want) << entry.path().filename();
    ++files;
  }
  EXPECT_GE(files, 13u);
}

TEST(Protocol, EnvelopeValidation) {
  Hand h;
  const auto& d = h.dispatcher;
  auto r = d.handle_request(json::array());
  EXPECT_EQ(r.at("requestId"), "unknown");
  EXPECT_EQ(code_of(r), "InvalidRequest");

  r = d.handle_request({{"v", 1}, {"kind", "config"}});
  EXPECT_EQ(r.at("requestId"), "unknown");
  EXPECT_EQ(code_of(r), "InvalidRequest");

  r = d.handle_request({{"v", 1}, {"requestId", ""}, {"kind", "config"}});
  EXPECT_EQ(code_of(r), "InvalidRequest");

  r = d.handle_request({{"requestId", "x"}, {"kind", "config"}});
  EXPECT_EQ(r.at("requestId"), "x");
  EXPECT_EQ(code_of(r), "UnsupportedVersion");

  r = d.handle_request({{"v", 1}, {"requestId", "x"}, {"kind", "query"}, {"payload", 3}});
  EXPECT_EQ(code_of(r), "InvalidRequest");

  // Missing payload defaults to {}.
  r = d.handle_request({{"v", 1}, {"requestId", "x"}, {"kind", "config"}});
  EXPECT_EQ(r.at("status"), "ok");
  EXPECT_EQ(r.at("kind"), "config");
}

TEST(Protocol, PayloadValidation) {
  Hand h;
  const auto& d = h.dispatcher;
  EXPECT_EQ(code_of(d.handle_request(request("1", "query"))), "InvalidRequest");
  EXPECT_EQ(code_of(d.handle_request(request("1", "query", {{"queryString", 5}}))), "InvalidRequest");
  EXPECT_EQ(code_of(d.handle_request(request("1", "query", {{"queryString", "dog"}, {"pageSize", 0}}))),
            "InvalidRequest");
  EXPECT_EQ(code_of(d.handle_request(request("1", "query", {{"queryString", "dog"}, {"pageSize", 1001}}))),
            "InvalidRequest");
  EXPECT_EQ(code_of(d.handle_request(request("1", "query", {{"queryString", "dog"}, {"policy", "best"}}))),
            "InvalidRequest");
  EXPECT_EQ(code_of(d.handle_request(
                request("1", "query", {{"queryString", "dog"}, {"temporal", {{"windowMs", 0}}}}))),
            "InvalidRequest");
  EXPECT_EQ(code_of(d.handle_request(request("1", "query", {{"queryString", "dog"}, {"indexes", {"x"}}}))),
            "IndexUnavailable");
  EXPECT_EQ(code_of(d.handle_request(request("1", "similar", {{"segmentId", "nope"}}))), "UnknownSegment");
  EXPECT_EQ(code_of(d.handle_request(request("1", "summary", {{"videoId", "nope"}}))), "UnknownVideo");
  EXPECT_EQ(code_of(d.handle_request(request("1", "videoDetail", {{"videoId", "nope"}}))), "UnknownVideo");
  EXPECT_EQ(code_of(d.handle_request(request("1", "submit", {{"taskType", "XYZ"}}))), "InvalidRequest");
}

TEST(Protocol, ParseErrorsCarryReasonAndOffset) {
  Hand h;
  const auto check = [&](const std::string& q, const std::string& reason, std::size_t offset) {
    const auto r = h.dispatcher.handle_request(request("p", "query", {{"queryString", q}}));
    const auto& e = r.at("error");
    EXPECT_EQ(e.at("code"), "ParseError") << q;
    EXPECT_EQ(e.at("reason"), reason) << q;
    EXPECT_EQ(e.at("offset"), offset) << q;
  };
  check("a < < b", "EmptyStage", 4);
  check("dog -x cat", "UnknownPrefix", 4);
  check("dog -c", "DanglingPrefix", 4);
  check("\"open", "UnbalancedQuote", 0);
}

TEST(Protocol, PolicyOverrideChangesRanking) {
  Hand h;
  // Free text + filter: FilterByVideos keeps embedding scores, rrfFuse uses
  // reciprocal ranks.
  const auto base = h.dispatcher.handle_request(request("q", "query", {{"queryString", "x -c dog"}}));
  ASSERT_EQ(base.at("status"), "ok");
  for (const auto& hit : base.at("payload").at("hits")) EXPECT_EQ(hit.at("source"), "embedding");
  const auto fused = h.dispatcher.handle_request(
      request("q", "query", {{"queryString", "x -c dog"}, {"policy", {{"strategy", "rrfFuse"}, {"kConst", 1}}}}));
  ASSERT_EQ(fused.at("status"), "ok");
  const auto& hits = fused.at("payload").at("hits");
  ASSERT_FALSE(hits.empty());
  // a_0 is metadata rank 1 (1/2) plus some embedding rank.
  EXPECT_GT(hits[0].at("score").get<double>(), 0.5);
}

TEST(Protocol, PaginationTotals) {
  auto fc = testing::make_fixture_catalog({.seed = 42, .videos = 5, .segments_per_video = 10, .dim = 16});
  HashedTokenEncoder encoder;
  Dispatcher d(*fc->catalog, encoder, nullptr);
  const auto r = d.handle_request(request(
      "p", "query", {{"queryString", "anything"}, {"pageSize", 10}, {"temporal", {{"perStageDepth", 35}}}}));
  ASSERT_EQ(r.at("status"), "ok") << r;
  const auto& p = r.at("payload");
  EXPECT_EQ(p.at("totalHits"), 35);
  EXPECT_EQ(p.at("totalPages"), 4);
  EXPECT_EQ(p.at("hits").size(), 10u);

  std::vector<std::string> all;
  for (int page = 0; page < 4; ++page) {
    const auto rp = d.handle_request(request(
        "p", "query",
        {{"queryString", "anything"}, {"page", page}, {"pageSize", 10}, {"temporal", {{"perStageDepth", 35}}}}));
    std::size_t expected_rank = static_cast<std::size_t>(page) * 10 + 1;
    for (const auto& hit : rp.at("payload").at("hits")) {
      EXPECT_EQ(hit.at("rank"), expected_rank++);
      all.push_back(hit.at("segmentId"));
    }
  }
  EXPECT_EQ(all.size(), 35u);
  const auto beyond = d.handle_request(request(
      "p", "query", {{"queryString", "anything"}, {"page", 9}, {"pageSize", 10}, {"temporal", {{"perStageDepth", 35}}}}));
  EXPECT_TRUE(beyond.at("payload").at("hits").empty());
  EXPECT_EQ(beyond.at("payload").at("totalPages"), 4);
}

TEST(Protocol, SimilarExcludesQueryAndFindsDuplicate) {
  auto fc = testing::make_fixture_catalog({.seed = 42, .videos = 6, .segments_per_video = 10, .dim = 32});
  ASSERT_TRUE(fc->info.duplicate);
  HashedTokenEncoder encoder;
  Dispatcher d(*fc->catalog, encoder, nullptr);
  const auto& [original, copy] = *fc->info.duplicate;
  const auto r = d.handle_request(request("s", "similar", {{"segmentId", original}, {"k", 5}}));
  ASSERT_EQ(r.at("status"), "ok") << r;
  const auto& hits = r.at("payload").at("hits");
  ASSERT_EQ(hits.size(), 5u);
  EXPECT_EQ(hits[0].at("segmentId"), copy);
  EXPECT_NEAR(hits[0].at("score").get<double>(), 1.0, 1e-6);
  for (const auto& h : hits) EXPECT_NE(h.at("segmentId"), original);
  for (std::size_t i = 1; i < hits.size(); ++i) {
    EXPECT_GE(hits[i - 1].at("score").get<double>(), hits[i].at("score").get<double>());
  }
}

TEST(Protocol, SummaryAndDetailFromFixture) {
  auto fc = testing::make_fixture_catalog({.seed = 1, .videos = 2, .segments_per_video = 40, .dim = 16});
  HashedTokenEncoder encoder;
  Dispatcher d(*fc->catalog, encoder, nullptr);
  const std::string vid = fc->catalog->store.video_ids().front();

  const auto s = d.handle_request(request("s", "summary", {{"videoId", vid}}));
  ASSERT_EQ(s.at("status"), "ok");
  const auto& frames = s.at("payload").at("frames");
  EXPECT_EQ(frames.size(), 25u);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    EXPECT_LT(frames[i - 1].at("startMs").get<std::int64_t>(), frames[i].at("startMs").get<std::int64_t>());
  }
  EXPECT_EQ(d.handle_request(request("s", "summary", {{"videoId", vid}, {"n", 3}}))
                .at("payload").at("frames").size(), 3u);

  const auto v = d.handle_request(request("v", "videoDetail", {{"videoId", vid}}));
  const auto& segs = v.at("payload").at("segments");
  ASSERT_EQ(segs.size(), 40u);
  for (std::size_t i = 1; i < segs.size(); ++i) {
    EXPECT_LE(segs[i - 1].at("endMs").get<std::int64_t>(), segs[i].at("startMs").get<std::int64_t>());
  }
  EXPECT_FALSE(v.at("payload").at("video").contains("kind"));
}

TEST(Protocol, ExploreAfterClustering) {
  auto fc = testing::make_fixture_catalog({.seed = 2, .videos = 8, .segments_per_video = 4, .dim = 16});
  auto& cat = *fc->catalog;
  const auto result = cluster_videos(cat.store, *cat.indexes.get("main"), 2, 7);
  store_clusters(cat.store, result, 2, 7, "main");
  HashedTokenEncoder encoder;
  Dispatcher d(cat, encoder, nullptr);
  const auto r = d.handle_request(request("e", "explore"));
  ASSERT_EQ(r.at("status"), "ok") << r;
  const auto& clusters = r.at("payload").at("clusters");
  ASSERT_EQ(clusters.size(), 2u);
  std::size_t members = 0;
  for (const auto& c : clusters) {
    members += c.at("size").get<std::size_t>();
    EXPECT_EQ(c.at("memberVideoIds").size(), c.at("size").get<std::size_t>());
    const std::string medoid = c.at("medoidVideoId");
    EXPECT_EQ(c.at("medoidKeyframeRef"), cat.store.get_video(medoid).segments.front().keyframe_ref);
  }
  EXPECT_EQ(members, 8u);
}

TEST(Protocol, SubmitThroughEvalClient) {
  testing::StubEvalServer stub;
  stub.start();
  Hand h;
  std::vector<json> log;
  std::mutex mu;
  auto client = std::make_shared<EvalClient>(
      EvalConfig{stub.base_url(), "stub-session", 2000, 0},
      [&](const json& line) {
        std::lock_guard lock(mu);
        log.push_back(line);
      });
  Dispatcher d(*h.catalog, h.encoder, client);

  auto r = d.handle_request(request("s1", "submit", {{"taskType", "KIS"}, {"videoId", "a"}}));
  EXPECT_EQ(code_of(r), "MissingField");
  r = d.handle_request(request("s2", "submit", {{"taskType", "QA"}, {"text", "  "}}));
  EXPECT_EQ(code_of(r), "MissingField");
  EXPECT_EQ(stub.submit_count(), 0u);

  r = d.handle_request(request("s3", "submit", {{"taskType", "KIS"}, {"videoId", "a"}, {"timeMs", 1500}}));
  ASSERT_EQ(r.at("status"), "ok") << r;
  EXPECT_EQ(r.at("payload").at("upstreamStatus"), 200);
  EXPECT_EQ(r.at("payload").at("body"), R"({"status":"correct"})");
  EXPECT_EQ(stub.submit_count(), 1u);

  stub.set_status(401, R"({"status":"unauthorized"})");
  r = d.handle_request(request("s4", "submit", {{"taskType", "AVS"}, {"videoId", "b"}, {"timeMs", 0}}));
  EXPECT_EQ(code_of(r), "UpstreamRejected");
  EXPECT_EQ(r.at("error").at("upstreamStatus"), 401);
  EXPECT_EQ(r.at("error").at("upstreamBody"), R"({"status":"unauthorized"})");
  EXPECT_EQ(stub.submit_count(), 2u);

  EXPECT_EQ(d.handle_request(request("c", "config")).at("payload").at("submissionsEnabled"), true);
}

TEST(Protocol, FaultHookBecomesInternalError) {
  Hand h;
  h.dispatcher.set_fault_hook([](const std::string& kind, const json&) {
    if (kind == "summary") throw std::runtime_error("boom");
  });
  const auto r = h.dispatcher.handle_request(request("f1", "summary", {{"videoId", "a"}}));
  EXPECT_EQ(r.at("requestId"), "f1");
  EXPECT_EQ(code_of(r), "InternalError");
  EXPECT_EQ(h.dispatcher.handle_request(request("f2", "config")).at("status"), "ok");
}

TEST(Protocol, ResponsesRoundTripAsText) {
  Hand h;
  const std::string frame = h.dispatcher.handle(request("t", "query", {{"queryString", "-c dog"}}).dump());
  const json back = json::parse(frame);
  EXPECT_EQ(back.at("v"), 1);
  EXPECT_EQ(back.at("requestId"), "t");
  EXPECT_EQ(back.dump(), frame);  // canonical: sorted keys, compact
}

TEST(Protocol, Health) {
  Hand h;
  const auto j = h.dispatcher.health();
  EXPECT_EQ(j.at("status"), "ok");
  EXPECT_EQ(j.at("protocol"), 1);
  EXPECT_EQ(j.at("videos"), 2);
  EXPECT_EQ(j.at("segments"), 3);
  EXPECT_EQ(j.at("indexes"), json::array({"main"}));
}

}  // namespace
}  // namespace vidseek
