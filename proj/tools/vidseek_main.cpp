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

// Command-line front end: fixture generation, ingest, clustering, serving.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>
#include <nlohmann/json.hpp>

#include "vidseek/catalog.hpp"
#include "vidseek/catalog_ingest.hpp"
#include "vidseek/error.hpp"
#include "vidseek/eval_client.hpp"
#include "vidseek/explore.hpp"
#include "vidseek/fixture.hpp"
#include "vidseek/gateway_server.hpp"
#include "vidseek/protocol.hpp"
#include "vidseek/text_encoder.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vidseek;

namespace {

constexpr const char* kDefaultDataDir = "vidseek-data";

struct FixtureArgs {
  FixtureOptions options;
  std::string dataset = "V";
  std::string out;
  bool no_duplicate = false;
  bool no_keyframes = false;
};

struct IngestArgs {
  std::string manifest;
  std::string index = "main";
  std::string data = kDefaultDataDir;
};

struct ClusterArgs {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::string index;
  std::string data = kDefaultDataDir;
};

struct ServeArgs {
  std::string data = kDefaultDataDir;
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;
  std::string eval_url;
  std::string eval_session;
  int eval_timeout_ms = 5000;
  std::string eval_routes;
  std::string ui;
  std::string text_vectors;
  std::string policy = "filterByVideos";
  std::int64_t window_ms = 30000;
  std::size_t depth = 1000;
  std::size_t workers = 0;
};

struct QueryArgs {
  std::string data = kDefaultDataDir;
  std::string query;
  std::size_t page = 0;
  std::size_t page_size = 10;
  std::string policy;
};

void print(const json& j) { std::cout << j.dump(2) << std::endl; }

int run_fixture(FixtureArgs& a) {
  const auto dataset = dataset_from_name(a.dataset);
  if (!dataset) throw Error(Errc::InvalidRequest, "dataset must be V, M or S");
  a.options.dataset = *dataset;
  a.options.plant_duplicate = !a.no_duplicate;
  a.options.write_keyframes = !a.no_keyframes;
  const FixtureInfo info = generate_fixture(a.options, a.out);
  const Manifest manifest = load_manifest(info.manifest);
  std::size_t segments = 0;
  for (const auto& v : manifest.videos) {
    segments += read_f32_file(manifest.base_dir / v.embeddings_file).size() / manifest.dim;
  }
  json out{{"manifest", info.manifest.string()},
           {"videos", manifest.videos.size()},
           {"segments", segments},
           {"dim", manifest.dim},
           {"groups", info.themes}};
  if (info.duplicate) {
    out["duplicate"] = {info.duplicate->first, info.duplicate->second};
  }
  print(out);
  return 0;
}

int run_ingest(const IngestArgs& a) {
  if (!valid_index_name(a.index)) {
    throw Error(Errc::InvalidRequest, "index name must match [A-Za-z0-9_-]+");
  }
  Catalog catalog;
  load_catalog(catalog, a.data);
  const bool fresh = catalog.indexes.empty();
  const IngestReport report =
      ingest_manifest(a.manifest, catalog.indexes, catalog.store, a.index);
  if (fresh) catalog.default_index = a.index;
  if (catalog.media_root.empty()) {
    catalog.media_root = fs::absolute(fs::path(a.manifest)).parent_path();
  }
  save_catalog(catalog, a.data);
  json out = to_json(report);
  out["data"] = a.data;
  out["index"] = a.index;
  print(out);
  return 0;
}

int run_cluster(const ClusterArgs& a) {
  Catalog catalog;
  load_catalog(catalog, a.data);
  const std::string index_name = a.index.empty() ? catalog.default_index : a.index;
  const auto index = catalog.indexes.get(index_name);
  const std::size_t k =
      a.k != 0 ? a.k : default_cluster_count(catalog.store.video_count());
  const ClusteringResult result = cluster_videos(catalog.store, *index, k, a.seed);
  store_clusters(catalog.store, result, k, a.seed, index_name);
  save_catalog(catalog, a.data);
  json sizes = json::array();
  for (const auto& c : result.clusters) {
    sizes.push_back({{"clusterId", c.cluster_id},
                     {"medoidVideoId", c.medoid_video_id},
                     {"size", c.member_video_ids.size()}});
  }
  print({{"k", k},
         {"seed", a.seed},
         {"iterations", result.iterations},
         {"converged", result.converged},
         {"objective", result.objective_history.empty()
                           ? 0.0
                           : result.objective_history.back()},
         {"clusters", std::move(sizes)}});
  return 0;
}

std::unique_ptr<TextEncoder> make_encoder(const std::string& text_vectors) {
  if (text_vectors.empty()) return std::make_unique<HashedTokenEncoder>();
  auto lookup =
      std::make_unique<LookupTextEncoder>(std::make_unique<HashedTokenEncoder>());
  lookup->load_jsonl(text_vectors);
  return lookup;
}

ServeConfig serve_config(const std::string& policy, std::int64_t window_ms,
                         std::size_t depth) {
  ServeConfig config;
  if (!policy.empty()) {
    const auto s = merge_strategy_from_name(policy);
    if (!s) throw Error(Errc::InvalidRequest, "unknown merge policy '" + policy + "'");
    config.policy.strategy = *s;
  }
  config.temporal.window_ms = window_ms;
  config.temporal.per_stage_depth = depth;
  return config;
}

int run_serve(const ServeArgs& a) {
  Catalog catalog;
  load_catalog(catalog, a.data);
  const auto encoder = make_encoder(a.text_vectors);

  std::shared_ptr<const EvalClient> eval;
  if (!a.eval_url.empty()) {
    EvalConfig ec;
    ec.base_url = a.eval_url;
    ec.session_token = a.eval_session;
    ec.timeout_ms = a.eval_timeout_ms;
    if (!a.eval_routes.empty()) {
      std::ifstream in(a.eval_routes);
      if (!in) throw Error(Errc::ConfigMissing, "cannot read " + a.eval_routes);
      ec.routes = RouteTable::from_json(json::parse(in));
    }
    eval = std::make_shared<EvalClient>(std::move(ec));
  }

  const Dispatcher dispatcher(catalog, *encoder, eval,
                              serve_config(a.policy, a.window_ms, a.depth));
  ServerOptions options;
  options.address = a.address;
  options.port = a.port;
  options.worker_threads = a.workers;
  options.media_root = catalog.media_root;
  if (!a.ui.empty()) options.ui_root = fs::path(a.ui);

  GatewayServer server(dispatcher, options);
  server.start();
  std::cout << json{{"event", "listening"},
                    {"address", a.address},
                    {"port", server.port()},
                    {"videos", catalog.store.video_count()},
                    {"segments", catalog.store.segment_count()},
                    {"submissions", eval != nullptr}}
                   .dump()
            << std::endl;

  boost::asio::io_context signals_ctx;
  boost::asio::signal_set signals(signals_ctx, SIGINT, SIGTERM);
  signals.async_wait([](const boost::system::error_code&, int) {});
  signals_ctx.run();

  server.stop();
  std::cout << json{{"event", "stopped"}}.dump() << std::endl;
  return 0;
}

int run_query(const QueryArgs& a) {
  Catalog catalog;
  load_catalog(catalog, a.data);
  const HashedTokenEncoder encoder;
  const Dispatcher dispatcher(catalog, encoder, nullptr,
                              serve_config(a.policy, 30000, 1000));
  json payload{{"queryString", a.query}, {"page", a.page}, {"pageSize", a.page_size}};
  const json reply = dispatcher.handle_request(
      {{"v", kProtocolVersion},
       {"requestId", "cli"},
       {"kind", "query"},
       {"payload", std::move(payload)}});
  if (reply.at("status") != "ok") {
    std::cerr << json{{"error", reply.at("error")}}.dump() << std::endl;
    return 1;
  }
  print(reply.at("payload"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vidseek: interactive video retrieval middleware"};
  app.require_subcommand(1);
  app.set_version_flag("--version", VIDSEEK_VERSION);

  FixtureArgs fx;
  auto* fixture = app.add_subcommand("fixture", "Generate a synthetic corpus");
  fixture->add_option("--out", fx.out, "Output directory")->required();
  fixture->add_option("--seed", fx.options.seed, "RNG seed");
  fixture->add_option("--videos", fx.options.videos, "Number of videos")
      ->check(CLI::PositiveNumber);
  fixture->add_option("--segments", fx.options.segments_per_video,
                      "Segments per video")
      ->check(CLI::PositiveNumber);
  fixture->add_option("--dim", fx.options.dim, "Embedding dimension")
      ->check(CLI::Range(2, 8192));
  fixture->add_option("--groups", fx.options.groups, "Theme groups (0 = auto)");
  fixture->add_option("--dataset", fx.dataset, "V, M or S");
  fixture->add_flag("--no-duplicate", fx.no_duplicate,
                    "Skip the planted duplicate vector");
  fixture->add_flag("--no-keyframes", fx.no_keyframes, "Skip SVG keyframes");

  IngestArgs ig;
  auto* ingest = app.add_subcommand("ingest", "Ingest a manifest into a data directory");
  ingest->add_option("--manifest", ig.manifest, "manifest.json")->required();
  ingest->add_option("--index", ig.index, "Target index name");
  ingest->add_option("--data", ig.data, "Data directory")->envname("VIDSEEK_DATA");

  ClusterArgs cl;
  auto* cluster = app.add_subcommand("cluster", "Build exploration clusters");
  cluster->add_option("--k", cl.k, "Cluster count (0 = ceil(sqrt(n/2)))");
  cluster->add_option("--seed", cl.seed, "Seeding RNG seed");
  cluster->add_option("--index", cl.index, "Index to cluster (default index if empty)");
  cluster->add_option("--data", cl.data, "Data directory")->envname("VIDSEEK_DATA");

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "Run the websocket gateway");
  serve->add_option("--data", sv.data, "Data directory")->envname("VIDSEEK_DATA");
  serve->add_option("--address", sv.address, "Listen address");
  serve->add_option("--port", sv.port, "Listen port (0 = ephemeral)")
      ->envname("VIDSEEK_PORT");
  serve->add_option("--eval-url", sv.eval_url, "Evaluation server base URL")
      ->envname("VIDSEEK_EVAL_URL");
  serve->add_option("--eval-session", sv.eval_session, "Evaluation session token")
      ->envname("VIDSEEK_EVAL_SESSION");
  serve->add_option("--eval-timeout-ms", sv.eval_timeout_ms, "Upstream timeout")
      ->check(CLI::PositiveNumber);
  serve->add_option("--eval-routes", sv.eval_routes, "Route template table (JSON)");
  serve->add_option("--ui", sv.ui, "Static UI directory");
  serve->add_option("--text-vectors", sv.text_vectors,
                    "JSON-lines {text, vector} table for query encoding");
  serve->add_option("--policy", sv.policy, "Default merge policy");
  serve->add_option("--window-ms", sv.window_ms, "Temporal window")
      ->check(CLI::PositiveNumber);
  serve->add_option("--depth", sv.depth, "Per-stage depth")->check(CLI::PositiveNumber);
  serve->add_option("--workers", sv.workers, "Dispatch threads (0 = auto)");

  QueryArgs qa;
  auto* query = app.add_subcommand("query", "Run one query against a data directory");
  query->add_option("query", qa.query, "Query string (put it after -- if it starts with -)")->required();
  query->add_option("--data", qa.data, "Data directory")->envname("VIDSEEK_DATA");
  query->add_option("--page", qa.page, "Page number");
  query->add_option("--page-size", qa.page_size, "Page size")->check(CLI::PositiveNumber);
  query->add_option("--policy", qa.policy, "Merge policy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*fixture) return run_fixture(fx);
    if (*ingest) return run_ingest(ig);
    if (*cluster) return run_cluster(cl);
    if (*serve) return run_serve(sv);
    if (*query) return run_query(qa);
  } catch (const Error& e) {
    std::cerr << json{{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}}
                     .dump()
              << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error",
                       {{"code", to_string(Errc::InternalError)}, {"message", e.what()}}}}
                     .dump()
              << std::endl;
    return 1;
  }
  return 0;
}
