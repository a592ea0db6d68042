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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vidseek/embedding_index.hpp"
#include "vidseek/fusion.hpp"
#include "vidseek/metadata_store.hpp"
#include "vidseek/query_language.hpp"
#include "vidseek/temporal_merge.hpp"
#include "vidseek/text_encoder.hpp"

namespace vidseek {

struct EmbeddingSubQuery {
  std::string index;
  std::variant<std::string, EmbeddingVector> query;  // text or ready vector
};

struct MetadataSubQuery {
  Modality modality = Modality::Concept;
  std::string term;
  double min_score = 0.0;
};

struct StagePlan {
  std::vector<EmbeddingSubQuery> embedding;  // one per target index
  std::vector<MetadataSubQuery> metadata;    // one per filter
  /// Requested policy, coerced to MetadataOnly / EmbeddingOnly when the stage
  /// has only one kind of sub-query.
  MergePolicy policy;
  std::size_t depth = 1000;
};

struct QueryPlan {
  std::vector<StagePlan> stages;
  MergePolicy policy;
  TemporalParams temporal;
};

/// Splits an AST into per-stage sub-queries. Free text fans out to
/// ast.target_indexes if set, otherwise to `default_indexes`.
QueryPlan plan_query(const QueryAst& ast, const MergePolicy& policy,
                     const TemporalParams& temporal,
                     std::span<const std::string> default_indexes);

struct QueryResult {
  bool temporal = false;
  std::vector<RankedHit> hits;          // single-stage result
  std::vector<TemporalMatch> matches;   // multi-stage result
};

/// Executes plans against shared read-only state. Holds no per-request
/// state, so one instance serves all connections.
class Orchestrator {
 public:
  Orchestrator(const IndexRegistry& indexes, const MetadataStore& store,
               const TextEncoder& encoder)
      : indexes_(indexes), store_(store), encoder_(encoder) {}

  /// Issues all sub-queries of the stage concurrently, joins them, then merges
  /// per the stage policy. Result has at most stage.depth hits. A failing
  /// sub-query rethrows after all others finished; the first failure in plan
  /// order wins.
  std::vector<RankedHit> execute_stage(const StagePlan& stage) const;

  /// Runs stages concurrently; multi-stage plans go through temporal_merge.
  QueryResult execute(const QueryPlan& plan) const;

  std::vector<RankedHit> run_embedding(const EmbeddingSubQuery& sub,
                                       std::size_t depth) const;

 private:
  const IndexRegistry& indexes_;
  const MetadataStore& store_;
  const TextEncoder& encoder_;
};

}  // namespace vidseek
