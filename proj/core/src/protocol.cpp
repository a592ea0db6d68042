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

#include <algorithm>
#include <array>

#include "vidseek/error.hpp"
#include "vidseek/explore.hpp"
#include "vidseek/query_language.hpp"

namespace vidseek {

using nlohmann::json;

namespace {

[[noreturn]] void bad_request(const std::string& message) {
  throw Error(Errc::InvalidRequest, message);
}

const json* member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string required_string(const json& obj, const char* key) {
  const json* v = member(obj, key);
  if (v == nullptr) bad_request(std::string("missing '") + key + "'");
  if (!v->is_string()) bad_request(std::string("'") + key + "' must be a string");
  return v->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
  const json* v = member(obj, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_string()) bad_request(std::string("'") + key + "' must be a string");
  return v->get<std::string>();
}

std::optional<std::int64_t> optional_int(const json& obj, const char* key) {
  const json* v = member(obj, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_number_integer()) {
    bad_request(std::string("'") + key + "' must be an integer");
  }
  return v->get<std::int64_t>();
}

std::size_t bounded(const json& obj, const char* key, std::size_t fallback,
                    std::int64_t lo, std::int64_t hi) {
  const auto v = optional_int(obj, key);
  if (!v) return fallback;
  if (*v < lo || *v > hi) {
    bad_request(std::string("'") + key + "' must be in [" + std::to_string(lo) +
                ", " + std::to_string(hi) + "]");
  }
  return static_cast<std::size_t>(*v);
}

MergeStrategy strategy_named(const std::string& name) {
  const auto s = merge_strategy_from_name(name);
  if (!s) bad_request("unknown merge strategy '" + name + "'");
  return *s;
}

bool known_kind(const std::string& kind) {
  static constexpr std::array<std::string_view, 7> kKinds = {
      "query", "similar", "summary", "videoDetail", "explore", "submit", "config"};
  return std::find(kKinds.begin(), kKinds.end(), kind) != kKinds.end();
}

MergePolicy policy_from_json(const json& j, MergePolicy base) {
  if (j.is_string()) {
    base.strategy = strategy_named(j.get<std::string>());
  } else if (j.is_object()) {
    if (const auto s = optional_string(j, "strategy")) {
      base.strategy = strategy_named(*s);
    }
    if (const auto k = optional_int(j, "kConst")) {
      if (*k < 1 || *k > 1'000'000) bad_request("'kConst' must be in [1, 1000000]");
      base.k_const = static_cast<int>(*k);
    }
  } else {
    bad_request("'policy' must be a string or object");
  }
  validate(base);
  return base;
}

TemporalParams temporal_from_json(const json& j, TemporalParams base) {
  if (!j.is_object()) bad_request("'temporal' must be an object");
  if (const auto w = optional_int(j, "windowMs")) {
    if (*w < 0) bad_request("'windowMs' must be non-negative");
    base.window_ms = *w;
  }
  if (const auto d = optional_int(j, "perStageDepth")) {
    if (*d < 1) bad_request("'perStageDepth' must be at least 1");
    base.per_stage_depth = static_cast<std::size_t>(*d);
  }
  validate(base);
  return base;
}

json policy_json(const MergePolicy& p) {
  return {{"strategy", to_string(p.strategy)}, {"kConst", p.k_const}};
}

json temporal_json(const TemporalParams& t) {
  return {{"windowMs", t.window_ms}, {"perStageDepth", t.per_stage_depth}};
}

template <typename T>
json page_json(const Page<T>& page, bool temporal, json hits) {
  return {{"page", page.page},
          {"pageSize", page.page_size},
          {"totalHits", page.total_items},
          {"totalPages", page.total_pages},
          {"temporal", temporal},
          {"hits", std::move(hits)}};
}

}  // namespace

json ok_response(const std::string& request_id, const std::string& kind,
                 json payload) {
  return {{"v", kProtocolVersion},
          {"requestId", request_id},
          {"status", "ok"},
          {"kind", kind},
          {"payload", std::move(payload)}};
}

json error_response(const std::string& request_id, json error) {
  return {{"v", kProtocolVersion},
          {"requestId", request_id},
          {"status", "error"},
          {"error", std::move(error)}};
}

json error_json(const std::exception& e) {
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    return {{"code", kParseErrorCode},
            {"reason", to_string(pe->code())},
            {"offset", pe->offset()},
            {"message", pe->what()}};
  }
  if (const auto* ur = dynamic_cast<const UpstreamRejected*>(&e)) {
    return {{"code", to_string(ur->code())},
            {"upstreamStatus", ur->status()},
            {"upstreamBody", ur->body()},
            {"message", ur->what()}};
  }
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return {{"code", to_string(err->code())}, {"message", err->what()}};
  }
  return {{"code", to_string(Errc::InternalError)},
          {"message", std::string("internal error: ") + e.what()}};
}

Dispatcher::Dispatcher(const Catalog& catalog, const TextEncoder& encoder,
                       std::shared_ptr<const EvalClient> eval,
                       ServeConfig config)
    : catalog_(catalog),
      encoder_(encoder),
      eval_(std::move(eval)),
      config_(std::move(config)),
      orchestrator_(catalog.indexes, catalog.store, encoder) {
  validate(config_.policy);
  validate(config_.temporal);
}

std::string Dispatcher::handle(std::string_view frame) const {
  json request = json::parse(frame, nullptr, /*allow_exceptions=*/false);
  if (request.is_discarded()) {
    return error_response(std::string(kUnknownRequestId),
                          {{"code", kProtocolError},
                           {"message", "frame is not valid JSON"}})
        .dump();
  }
  return handle_request(request).dump();
}

json Dispatcher::handle_request(const json& request) const {
  std::string request_id(kUnknownRequestId);
  try {
    if (!request.is_object()) bad_request("request must be a JSON object");
    const json* id = member(request, "requestId");
    if (id == nullptr || !id->is_string() || id->get<std::string>().empty()) {
      bad_request("'requestId' must be a non-empty string");
    }
    request_id = id->get<std::string>();

    const json* v = member(request, "v");
    if (v == nullptr || !v->is_number_integer() ||
        v->get<std::int64_t>() != kProtocolVersion) {
      return error_response(request_id,
                            {{"code", kUnsupportedVersion},
                             {"message", "expected \"v\": 1"}});
    }
    const std::string kind = required_string(request, "kind");
    if (!known_kind(kind)) {
      return error_response(request_id,
                            {{"code", kUnknownKind},
                             {"message", "unknown kind '" + kind + "'"}});
    }
    const json* payload = member(request, "payload");
    static const json kEmpty = json::object();
    if (payload != nullptr && !payload->is_object()) {
      bad_request("'payload' must be an object");
    }
    const json& args = payload == nullptr ? kEmpty : *payload;
    if (fault_hook_) fault_hook_(kind, args);
    return ok_response(request_id, kind, dispatch(kind, args));
  } catch (const std::exception& e) {
    return error_response(request_id, error_json(e));
  } catch (...) {
    return error_response(request_id, {{"code", to_string(Errc::InternalError)},
                                       {"message", "unknown failure"}});
  }
}

json Dispatcher::dispatch(const std::string& kind, const json& payload) const {
  if (kind == "query") return on_query(payload);
  if (kind == "similar") return on_similar(payload);
  if (kind == "summary") return on_summary(payload);
  if (kind == "videoDetail") return on_video_detail(payload);
  if (kind == "explore") return on_explore(payload);
  if (kind == "submit") return on_submit(payload);
  if (kind == "config") return on_config(payload);
  throw Error(Errc::InvalidRequest, "unknown kind '" + kind + "'");
}

json Dispatcher::hit_json(const RankedHit& hit, std::size_t rank) const {
  json out{{"rank", rank},
           {"segmentId", hit.segment_id},
           {"videoId", hit.video_id},
           {"score", hit.score},
           {"source", to_string(hit.source)}};
  if (const auto seg = catalog_.store.find_segment(hit.segment_id)) {
    out["startMs"] = seg->start_ms;
    out["endMs"] = seg->end_ms;
    out["keyframeRef"] = seg->keyframe_ref;
  } else {
    out["startMs"] = nullptr;
    out["endMs"] = nullptr;
    out["keyframeRef"] = nullptr;
  }
  return out;
}

json Dispatcher::match_json(const TemporalMatch& match, std::size_t rank) const {
  json chain = json::array();
  for (const auto& link : match.chain) {
    const auto seg = catalog_.store.find_segment(link.segment_id);
    chain.push_back({{"segmentId", link.segment_id},
                     {"startMs", link.start_ms},
                     {"endMs", link.end_ms},
                     {"score", link.score},
                     {"keyframeRef", seg ? json(seg->keyframe_ref) : json()}});
  }
  const auto& first = match.chain.front();
  return {{"rank", rank},
          {"segmentId", first.segment_id},
          {"videoId", match.video_id},
          {"score", match.score},
          {"source", "temporal"},
          {"startMs", first.start_ms},
          {"endMs", match.chain.back().end_ms},
          {"keyframeRef", chain.front().at("keyframeRef")},
          {"chain", std::move(chain)}};
}

json Dispatcher::on_query(const json& payload) const {
  const std::string text = required_string(payload, "queryString");
  const std::size_t page = bounded(payload, "page", 0, 0, 1'000'000'000);
  const std::size_t page_size =
      bounded(payload, "pageSize", config_.default_page_size, 1,
              static_cast<std::int64_t>(config_.max_page_size));
  MergePolicy policy = config_.policy;
  if (const json* p = member(payload, "policy")) policy = policy_from_json(*p, policy);
  TemporalParams temporal = config_.temporal;
  if (const json* t = member(payload, "temporal")) {
    temporal = temporal_from_json(*t, temporal);
  }

  QueryAst ast = parse_query(text);
  if (const json* idx = member(payload, "indexes")) {
    if (!idx->is_array() || idx->empty()) {
      bad_request("'indexes' must be a non-empty array of strings");
    }
    std::vector<std::string> names;
    for (const auto& n : *idx) {
      if (!n.is_string()) bad_request("'indexes' must be a non-empty array of strings");
      names.push_back(n.get<std::string>());
    }
    ast.target_indexes = std::move(names);
  }
  const std::vector<std::string> defaults{catalog_.default_index};
  const QueryPlan plan = plan_query(ast, policy, temporal, defaults);
  const QueryResult result = orchestrator_.execute(plan);

  json hits = json::array();
  if (result.temporal) {
    const auto slice = paginate(std::span<const TemporalMatch>(result.matches),
                                page, page_size);
    for (std::size_t i = 0; i < slice.items.size(); ++i) {
      hits.push_back(match_json(slice.items[i], page * page_size + i + 1));
    }
    return page_json(slice, true, std::move(hits));
  }
  const auto slice =
      paginate(std::span<const RankedHit>(result.hits), page, page_size);
  for (std::size_t i = 0; i < slice.items.size(); ++i) {
    hits.push_back(hit_json(slice.items[i], page * page_size + i + 1));
  }
  return page_json(slice, false, std::move(hits));
}

json Dispatcher::on_similar(const json& payload) const {
  const std::string segment_id = required_string(payload, "segmentId");
  const std::size_t k =
      bounded(payload, "k", config_.similar_k, 1,
              static_cast<std::int64_t>(config_.max_similar_k));
  const std::size_t page = bounded(payload, "page", 0, 0, 1'000'000'000);
  const std::size_t page_size = bounded(payload, "pageSize", k, 1,
                                        static_cast<std::int64_t>(k));
  const std::string index_name =
      optional_string(payload, "index").value_or(catalog_.default_index);
  const auto index = catalog_.indexes.get(index_name);

  const EmbeddingVector query = index->vector_of(segment_id);
  std::vector<RankedHit> hits;
  for (auto& h : index->search(query, k + 1)) {
    if (h.segment_id == segment_id) continue;
    hits.push_back(RankedHit{h.video_id, h.segment_id, h.score, 0, HitSource::Embedding});
  }
  if (hits.size() > k) hits.resize(k);
  renumber(hits);

  const auto slice = paginate(std::span<const RankedHit>(hits), page, page_size);
  json out = json::array();
  for (std::size_t i = 0; i < slice.items.size(); ++i) {
    out.push_back(hit_json(slice.items[i], page * page_size + i + 1));
  }
  return page_json(slice, false, std::move(out));
}

json Dispatcher::on_summary(const json& payload) const {
  const std::string video_id = required_string(payload, "videoId");
  const std::size_t n = bounded(payload, "n", config_.summary_size, 1, 10'000);
  const std::string index_name =
      optional_string(payload, "index").value_or(catalog_.default_index);
  const Summary summary = summarize(catalog_.store,
                                    *catalog_.indexes.get(index_name), video_id, n);
  json frames = json::array();
  for (const auto& f : summary.frames) {
    frames.push_back({{"segmentId", f.segment_id},
                      {"keyframeRef", f.keyframe_ref},
                      {"startMs", f.start_ms}});
  }
  return {{"videoId", summary.video_id}, {"frames", std::move(frames)}};
}

json Dispatcher::on_video_detail(const json& payload) const {
  const std::string video_id = required_string(payload, "videoId");
  const StoredVideo stored = catalog_.store.get_video(video_id);
  json video = to_json(stored.video);
  video.erase("kind");
  json segments = json::array();
  for (const auto& s : stored.segments) {
    json seg = to_json(s);
    seg.erase("kind");
    segments.push_back(std::move(seg));
  }
  return {{"video", std::move(video)}, {"segments", std::move(segments)}};
}

json Dispatcher::on_explore(const json&) const {
  const auto clusters = load_clusters(catalog_.store);
  if (!clusters) {
    throw Error(Errc::ClustersNotBuilt,
                "no clusters built; run 'vidseek cluster' first");
  }
  json out = json::array();
  for (const auto& c : *clusters) {
    json medoid_ref;
    if (const auto v = catalog_.store.find_video(c.medoid_video_id);
        v && !v->segments.empty()) {
      medoid_ref = v->segments.front().keyframe_ref;
    }
    out.push_back({{"clusterId", c.cluster_id},
                   {"medoidVideoId", c.medoid_video_id},
                   {"medoidKeyframeRef", std::move(medoid_ref)},
                   {"memberVideoIds", c.member_video_ids},
                   {"size", c.member_video_ids.size()}});
  }
  return {{"clusters", std::move(out)}};
}

json Dispatcher::on_submit(const json& payload) const {
  const std::string task_name = required_string(payload, "taskType");
  const auto task = task_type_from_name(task_name);
  if (!task) bad_request("'taskType' must be KIS, AVS or QA");
  Submission sub;
  sub.task = *task;
  sub.video_id = optional_string(payload, "videoId");
  sub.time_ms = optional_int(payload, "timeMs");
  sub.text = optional_string(payload, "text");
  validate(sub);
  if (!eval_) {
    throw Error(Errc::ConfigMissing, "submissions are disabled on this server");
  }
  const SubmissionReceipt receipt = eval_->submit(sub);
  return {{"upstreamStatus", receipt.upstream_status}, {"body", receipt.body}};
}

json Dispatcher::on_config(const json&) const {
  json indexes = json::array();
  for (const auto& name : catalog_.indexes.names()) {
    const auto idx = catalog_.indexes.get(name);
    indexes.push_back({{"name", name}, {"dim", idx->dim()}, {"size", idx->size()}});
  }
  json modalities = json::array();
  for (const Modality m : kAllModalities) {
    modalities.push_back(
        {{"prefix", std::string("-") + prefix_letter(m)}, {"name", to_string(m)}});
  }
  return {{"protocol", kProtocolVersion},
          {"defaultIndex", catalog_.default_index},
          {"indexes", std::move(indexes)},
          {"policy", policy_json(config_.policy)},
          {"temporal", temporal_json(config_.temporal)},
          {"pageSize", config_.default_page_size},
          {"maxPageSize", config_.max_page_size},
          {"summarySize", config_.summary_size},
          {"similarK", config_.similar_k},
          {"modalities", std::move(modalities)},
          {"mergeStrategies",
           {"filterByVideos", "rrfFuse", "embeddingOnly", "metadataOnly"}},
          {"submissionsEnabled", eval_ != nullptr}};
}

json Dispatcher::health() const {
  return {{"status", "ok"},
          {"name", "vidseek"},
          {"version", VIDSEEK_VERSION},
          {"protocol", kProtocolVersion},
          {"videos", catalog_.store.video_count()},
          {"segments", catalog_.store.segment_count()},
          {"indexes", catalog_.indexes.names()}};
}

}  // namespace vidseek
