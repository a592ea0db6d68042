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

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace vidseek {

enum class TaskType { KIS, AVS, QA };

std::string_view to_string(TaskType t) noexcept;
std::optional<TaskType> task_type_from_name(std::string_view name) noexcept;

struct Submission {
  TaskType task = TaskType::KIS;
  std::optional<std::string> video_id;
  std::optional<std::int64_t> time_ms;
  std::optional<std::string> text;
};

/// KIS/AVS need videoId and timeMs, QA needs non-empty text.
/// Throws Error(MissingField).
void validate(const Submission& submission);

/// One upstream call. `path` may contain {session} and {taskType}; `fields`
/// maps the logical names session, videoId, timeMs, text to body keys.
struct RouteTemplate {
  std::string path;
  std::map<std::string, std::string> fields;
};

/// Evaluation-server APIs change between competition years, so routes and
/// field names are data. defaults() is the mapping the bundled stub server
/// implements.
struct RouteTable {
  RouteTemplate kis;
  RouteTemplate avs;
  RouteTemplate qa;
  std::string status_path;  // GET, retried up to maxRetries
  /// POST {username, password}; the token is read from `login_token_field`.
  std::string login_path;
  std::string login_token_field;

  static RouteTable defaults();
  /// Overrides defaults with any keys present in `j`.
  static RouteTable from_json(const nlohmann::json& j);
  const RouteTemplate& for_task(TaskType t) const noexcept;
};

struct EvalConfig {
  std::string base_url;  // http://host:port[/prefix]
  std::string session_token;
  int timeout_ms = 5000;
  int max_retries = 2;
  RouteTable routes = RouteTable::defaults();
};

struct SubmissionReceipt {
  int upstream_status = 0;
  std::string body;
};

/// Receives one JSON object per submit() call and per status() attempt.
using EvalLogSink = std::function<void(const nlohmann::json& line)>;

/// Writes log lines to stderr.
EvalLogSink stderr_log_sink();

/// Client for a DRES-style evaluation server. Submissions are sent at most
/// once: they are never retried, whatever the failure. Thread-safe; each call
/// opens its own connection.
class EvalClient {
 public:
  explicit EvalClient(EvalConfig config, EvalLogSink log = stderr_log_sink());

  /// Errors: MissingField (before any I/O), ConfigMissing,
  /// UpstreamUnreachable (connect failure or timeout), UpstreamRejected
  /// (status >= 400).
  SubmissionReceipt submit(const Submission& submission) const;

  /// Idempotent GET on routes.status_path; retried on transport errors.
  SubmissionReceipt status() const;

  /// Exchanges credentials for a session token. Not retried. Errors:
  /// ConfigMissing, UpstreamUnreachable, UpstreamRejected, InvalidRequest
  /// (response lacks the token field).
  std::string login(const std::string& username,
                    const std::string& password) const;

  /// Body that submit() would POST.
  nlohmann::json submission_body(const Submission& submission) const;

  const EvalConfig& config() const noexcept { return config_; }

 private:
  EvalConfig config_;
  EvalLogSink log_;
};

}  // namespace vidseek
