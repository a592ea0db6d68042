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

#include "vidseek/orchestrator.hpp"

#include <algorithm>
#include <exception>
#include <future>

#include "vidseek/error.hpp"

namespace vidseek {

namespace {

template <class T>
std::vector<T> join_all(std::vector<std::future<T>>& futures) {
  std::vector<T> results;
  results.reserve(futures.size());
  std::exception_ptr first_error;
  for (auto& f : futures) {
    try {
      results.push_back(f.get());
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
      results.emplace_back();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace

QueryPlan plan_query(const QueryAst& ast, const MergePolicy& policy,
                     const TemporalParams& temporal,
                     std::span<const std::string> default_indexes) {
  validate(policy);
  validate(temporal);
  const std::span<const std::string> targets =
      ast.target_indexes ? std::span<const std::string>(*ast.target_indexes)
                         : default_indexes;
  QueryPlan plan;
  plan.policy = policy;
  plan.temporal = temporal;
  for (const Stage& stage : ast.stages) {
    StagePlan sp;
    sp.depth = temporal.per_stage_depth;
    if (stage.free_text) {
      for (const auto& index : targets) {
        sp.embedding.push_back({index, *stage.free_text});
      }
    }
    for (const auto& f : stage.filters) {
      sp.metadata.push_back({f.modality, f.term, 0.0});
    }
    sp.policy = policy;
    if (sp.embedding.empty()) {
      sp.policy.strategy = MergeStrategy::MetadataOnly;
    } else if (sp.metadata.empty()) {
      sp.policy.strategy = MergeStrategy::EmbeddingOnly;
    }
    plan.stages.push_back(std::move(sp));
  }
  return plan;
}

std::vector<RankedHit> Orchestrator::run_embedding(const EmbeddingSubQuery& sub,
                                                   std::size_t depth) const {
  const auto index = indexes_.get(sub.index);
  const EmbeddingVector query = std::visit(
      [&](const auto& q) -> EmbeddingVector {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, std::string>) {
          return encoder_.encode(q, index->dim());
        } else {
          return q;
        }
      },
      sub.query);
  std::vector<RankedHit> hits;
  for (auto& h : index->search(query, depth)) {
    hits.push_back({std::move(h.video_id), std::move(h.segment_id), h.score,
                    0, HitSource::Embedding});
  }
  renumber(hits);
  return hits;
}

std::vector<RankedHit> Orchestrator::execute_stage(const StagePlan& stage) const {
  const MergeStrategy strategy = stage.policy.strategy;
  const bool want_embedding = strategy != MergeStrategy::MetadataOnly;
  const bool want_metadata = strategy != MergeStrategy::EmbeddingOnly;
  const bool want_video_sets = strategy == MergeStrategy::FilterByVideos;

  std::vector<std::future<std::vector<RankedHit>>> embedding_jobs;
  std::vector<std::future<std::vector<RankedHit>>> metadata_jobs;
  std::vector<std::future<std::set<std::string>>> video_set_jobs;

  if (want_embedding) {
    for (const auto& sub : stage.embedding) {
      embedding_jobs.push_back(std::async(std::launch::async, [this, &sub, &stage] {
        try {
          return run_embedding(sub, stage.depth);
        } catch (const Error& e) {
          if (e.code() != Errc::IndexUnavailable) throw;
          throw Error(Errc::IndexUnavailable,
                      "embedding sub-query on index '" + sub.index +
                          "': " + e.what());
        }
      }));
    }
  }
  if (want_metadata) {
    for (const auto& sub : stage.metadata) {
      if (want_video_sets) {
        video_set_jobs.push_back(std::async(std::launch::async, [this, &sub] {
          return store_.video_ids_for_term(sub.modality, sub.term, sub.min_score);
        }));
      } else {
        metadata_jobs.push_back(std::async(std::launch::async, [this, &sub, &stage] {
          return store_.find_segments(sub.modality, sub.term, sub.min_score,
                                      stage.depth);
        }));
      }
    }
  }

  // Join everything before rethrowing so no task outlives the stage.
  std::exception_ptr error;
  const auto collect = [&error](auto& jobs) {
    using T = decltype(jobs.front().get());
    std::vector<T> out;
    try {
      out = join_all(jobs);
    } catch (...) {
      if (!error) error = std::current_exception();
    }
    return out;
  };
  auto embedding_lists = collect(embedding_jobs);
  auto metadata_lists = collect(metadata_jobs);
  auto video_sets = collect(video_set_jobs);
  if (error) std::rethrow_exception(error);

  std::vector<RankedHit> embedding;
  if (embedding_lists.size() == 1) {
    embedding = std::move(embedding_lists.front());
  } else if (embedding_lists.size() > 1) {
    embedding = rrf_fuse(embedding_lists, stage.policy.k_const);
  }

  std::vector<RankedHit> merged;
  switch (strategy) {
    case MergeStrategy::EmbeddingOnly:
      merged = std::move(embedding);
      break;
    case MergeStrategy::MetadataOnly:
      if (metadata_lists.size() == 1) {
        merged = std::move(metadata_lists.front());
      } else if (!metadata_lists.empty()) {
        merged = rrf_fuse(metadata_lists, stage.policy.k_const);
      }
      break;
    case MergeStrategy::FilterByVideos: {
      if (video_sets.empty()) {
        merged = std::move(embedding);
        break;
      }
      std::set<std::string> allowed = std::move(video_sets.front());
      for (std::size_t i = 1; i < video_sets.size(); ++i) {
        std::set<std::string> narrowed;
        std::set_intersection(allowed.begin(), allowed.end(),
                              video_sets[i].begin(), video_sets[i].end(),
                              std::inserter(narrowed, narrowed.end()));
        allowed = std::move(narrowed);
      }
      merged = filter_by_videos(embedding, allowed);
      break;
    }
    case MergeStrategy::RrfFuse: {
      std::vector<std::vector<RankedHit>> lists;
      lists.push_back(std::move(embedding));
      for (auto& l : metadata_lists) lists.push_back(std::move(l));
      merged = rrf_fuse(lists, stage.policy.k_const);
      break;
    }
  }
  if (merged.size() > stage.depth) merged.resize(stage.depth);
  return merged;
}

QueryResult Orchestrator::execute(const QueryPlan& plan) const {
  QueryResult result;
  if (plan.stages.size() == 1) {
    result.hits = execute_stage(plan.stages.front());
    return result;
  }
  std::vector<std::future<std::vector<RankedHit>>> jobs;
  for (const auto& stage : plan.stages) {
    jobs.push_back(std::async(std::launch::async,
                              [this, &stage] { return execute_stage(stage); }));
  }
  const auto stage_results = join_all(jobs);
  result.temporal = true;
  result.matches = temporal_merge(
      stage_results, plan.temporal,
      [this](const std::string& segment_id) -> std::optional<TimeSpan> {
        const auto s = store_.find_segment(segment_id);
        if (!s) return std::nullopt;
        return TimeSpan{s->start_ms, s->end_ms};
      });
  return result;
}

}  // namespace vidseek
