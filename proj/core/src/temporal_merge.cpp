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

#include "vidseek/temporal_merge.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace vidseek {

namespace {

struct Candidate {
  std::string_view segment_id;
  TimeSpan span;
  double score;
};

// candidates[stage] for one video, each sorted by (startMs, segmentId).
using VideoCandidates = std::vector<std::vector<Candidate>>;

std::optional<TemporalMatch> best_chain(const std::string& video_id,
                                        const VideoCandidates& stages,
                                        std::int64_t window_ms) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  const std::size_t n_stages = stages.size();
  std::vector<std::vector<double>> best(n_stages);
  std::vector<std::vector<std::size_t>> back(n_stages);
  std::vector<std::vector<bool>> reachable(n_stages);

  for (std::size_t s = 0; s < n_stages; ++s) {
    const auto& cur = stages[s];
    best[s].assign(cur.size(), 0.0);
    back[s].assign(cur.size(), kNone);
    reachable[s].assign(cur.size(), s == 0);
    if (s == 0) {
      for (std::size_t i = 0; i < cur.size(); ++i) best[0][i] = cur[i].score;
      continue;
    }
    const auto& prev = stages[s - 1];
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t j = 0; j < prev.size(); ++j) {
        if (!reachable[s - 1][j]) continue;
        if (prev[j].span.start_ms >= cur[i].span.start_ms) continue;
        if (cur[i].span.start_ms - prev[j].span.end_ms > window_ms) continue;
        const double candidate = best[s - 1][j] + cur[i].score;
        if (!reachable[s][i] || candidate > best[s][i]) {
          best[s][i] = candidate;
          back[s][i] = j;
          reachable[s][i] = true;
        }
      }
    }
  }

  const std::size_t last = n_stages - 1;
  std::size_t pick = kNone;
  for (std::size_t i = 0; i < stages[last].size(); ++i) {
    if (reachable[last][i] && (pick == kNone || best[last][i] > best[last][pick])) {
      pick = i;
    }
  }
  if (pick == kNone) return std::nullopt;

  TemporalMatch match;
  match.video_id = video_id;
  match.score = best[last][pick];
  match.chain.resize(n_stages);
  for (std::size_t s = n_stages; s-- > 0;) {
    const Candidate& c = stages[s][pick];
    match.chain[s] = {std::string(c.segment_id), c.span.start_ms,
                      c.span.end_ms, c.score};
    pick = back[s][pick];
  }
  return match;
}

}  // namespace

std::vector<TemporalMatch> temporal_merge(
    std::span<const std::vector<RankedHit>> stage_results,
    const TemporalParams& params, const SpanLookup& lookup) {
  const std::size_t n_stages = stage_results.size();
  if (n_stages == 0) return {};

  std::map<std::string, VideoCandidates> by_video;
  for (std::size_t s = 0; s < n_stages; ++s) {
    // Best score per segment within one stage list.
    std::unordered_map<std::string_view, const RankedHit*> unique;
    for (const auto& h : stage_results[s]) {
      auto [it, inserted] = unique.emplace(h.segment_id, &h);
      if (!inserted && h.score > it->second->score) it->second = &h;
    }
    for (const auto& [segment_id, hit] : unique) {
      const auto span = lookup(hit->segment_id);
      if (!span) continue;
      auto& stages = by_video[hit->video_id];
      stages.resize(n_stages);
      stages[s].push_back({hit->segment_id, *span, hit->score});
    }
  }

  std::vector<TemporalMatch> matches;
  for (auto& [video_id, stages] : by_video) {
    bool complete = true;
    for (auto& candidates : stages) {
      if (candidates.empty()) complete = false;
      std::sort(candidates.begin(), candidates.end(),
                [](const Candidate& a, const Candidate& b) {
                  if (a.span.start_ms != b.span.start_ms) {
                    return a.span.start_ms < b.span.start_ms;
                  }
                  return a.segment_id < b.segment_id;
                });
    }
    if (!complete) continue;
    if (auto m = best_chain(video_id, stages, params.window_ms)) {
      matches.push_back(std::move(*m));
    }
  }
  std::sort(matches.begin(), matches.end(),
            [](const TemporalMatch& a, const TemporalMatch& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.video_id < b.video_id;
            });
  return matches;
}

}  // namespace vidseek
