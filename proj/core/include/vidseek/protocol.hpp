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

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vidseek/catalog.hpp"
#include "vidseek/eval_client.hpp"
#include "vidseek/explore.hpp"
#include "vidseek/fusion.hpp"
#include "vidseek/orchestrator.hpp"
#include "vidseek/text_encoder.hpp"

namespace vidseek {

inline constexpr int kProtocolVersion = 1;

/// Server-level defaults; queries may override policy and temporal params.
struct ServeConfig {
  MergePolicy policy;
  TemporalParams temporal;
  std::size_t default_page_size = 50;
  std::size_t max_page_size = 1000;
  std::size_t summary_size = kDefaultSummarySize;
  std::size_t similar_k = 100;
  std::size_t max_similar_k = 10000;
};

/// Wire-only error codes (engine failures use to_string(Errc)).
inline constexpr std::string_view kProtocolError = "ProtocolError";
inline constexpr std::string_view kUnsupportedVersion = "UnsupportedVersion";
inline constexpr std::string_view kUnknownKind = "UnknownKind";
inline constexpr std::string_view kParseErrorCode = "ParseError";
inline constexpr std::string_view kUnknownRequestId = "unknown";

/// Maps one request frame to one response frame. Stateless per request and
/// safe to call from many threads; the catalog must not be mutated while a
/// Dispatcher is serving.
class Dispatcher {
 public:
  /// `eval` may be null, in which case submit answers ConfigMissing.
  Dispatcher(const Catalog& catalog, const TextEncoder& encoder,
             std::shared_ptr<const EvalClient> eval, ServeConfig config = {});

  /// Never throws. Invalid JSON gets a ProtocolError response with requestId
  /// "unknown".
  std::string handle(std::string_view frame) const;
  nlohmann::json handle_request(const nlohmann::json& request) const;

  nlohmann::json health() const;

  /// Runs before each well-formed request is dispatched; anything it throws
  /// becomes that request's error response. Test seam.
  using FaultHook = std::function<void(const std::string& kind,
                                       const nlohmann::json& payload)>;
  void set_fault_hook(FaultHook hook) { fault_hook_ = std::move(hook); }

  const ServeConfig& config() const noexcept { return config_; }

 private:
  nlohmann::json dispatch(const std::string& kind,
                          const nlohmann::json& payload) const;
  nlohmann::json on_query(const nlohmann::json& payload) const;
  nlohmann::json on_similar(const nlohmann::json& payload) const;
  nlohmann::json on_summary(const nlohmann::json& payload) const;
  nlohmann::json on_video_detail(const nlohmann::json& payload) const;
  nlohmann::json on_explore(const nlohmann::json& payload) const;
  nlohmann::json on_submit(const nlohmann::json& payload) const;
  nlohmann::json on_config(const nlohmann::json& payload) const;

  nlohmann::json hit_json(const RankedHit& hit, std::size_t rank) const;
  nlohmann::json match_json(const TemporalMatch& match, std::size_t rank) const;

  const Catalog& catalog_;
  const TextEncoder& encoder_;
  std::shared_ptr<const EvalClient> eval_;
  ServeConfig config_;
  Orchestrator orchestrator_;
  FaultHook fault_hook_;
};

nlohmann::json ok_response(const std::string& request_id,
                           const std::string& kind, nlohmann::json payload);
nlohmann::json error_response(const std::string& request_id,
                              nlohmann::json error);

/// {"code","message"} plus "reason"/"offset" for parser failures and
/// "upstreamStatus"/"upstreamBody" for rejected submissions.
nlohmann::json error_json(const std::exception& e);

}  // namespace vidseek
