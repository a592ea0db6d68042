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

#include "vidseek/eval_client.hpp"

#include <iostream>
#include <mutex>

#include <httplib.h>

#include "vidseek/error.hpp"

namespace vidseek {

using nlohmann::json;

namespace {

struct ParsedUrl {
  std::string scheme_host_port;
  std::string prefix;
};

ParsedUrl parse_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::ConfigMissing, "eval base URL needs a scheme: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http") {
    throw Error(Errc::ConfigMissing,
                "unsupported eval URL scheme '" + scheme +
                    "' (terminate TLS in a proxy)");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.scheme_host_port = url.substr(0, path_start);
  if (path_start != std::string::npos) {
    out.prefix = url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  return out;
}

std::string expand(std::string path, const std::string& key,
                   const std::string& value) {
  const std::string token = "{" + key + "}";
  for (auto pos = path.find(token); pos != std::string::npos;
       pos = path.find(token, pos + value.size())) {
    path.replace(pos, token.size(), value);
  }
  return path;
}

std::int64_t monotonic_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

httplib::Client make_client(const ParsedUrl& url, int timeout_ms) {
  httplib::Client client(url.scheme_host_port);
  const auto timeout = std::chrono::milliseconds(timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_keep_alive(false);
  client.set_follow_location(false);
  return client;
}

RouteTemplate route_from_json(const json& j, RouteTemplate base) {
  if (j.contains("path")) base.path = j.at("path").get<std::string>();
  if (j.contains("fields")) {
    for (const auto& [k, v] : j.at("fields").items()) {
      base.fields[k] = v.get<std::string>();
    }
  }
  return base;
}

}  // namespace

std::string_view to_string(TaskType t) noexcept {
  switch (t) {
    case TaskType::KIS: return "KIS";
    case TaskType::AVS: return "AVS";
    case TaskType::QA: return "QA";
  }
  return "KIS";
}

std::optional<TaskType> task_type_from_name(std::string_view name) noexcept {
  if (name == "KIS") return TaskType::KIS;
  if (name == "AVS") return TaskType::AVS;
  if (name == "QA") return TaskType::QA;
  return std::nullopt;
}

void validate(const Submission& s) {
  if (s.task == TaskType::QA) {
    if (!s.text || s.text->find_first_not_of(" \t\r\n") == std::string::npos) {
      throw Error(Errc::MissingField, "QA submissions need a non-empty 'text'");
    }
    return;
  }
  if (!s.video_id || s.video_id->empty()) {
    throw Error(Errc::MissingField, std::string(to_string(s.task)) +
                                        " submissions need 'videoId'");
  }
  if (!s.time_ms) {
    throw Error(Errc::MissingField, std::string(to_string(s.task)) +
                                        " submissions need 'timeMs'");
  }
  if (*s.time_ms < 0) {
    throw Error(Errc::MissingField, "'timeMs' must be non-negative");
  }
}

RouteTable RouteTable::defaults() {
  const std::map<std::string, std::string> fields = {
      {"session", "session"},
      {"videoId", "videoId"},
      {"timeMs", "timestampMs"},
      {"text", "text"}};
  RouteTable t;
  t.kis = {"/api/v1/submit", fields};
  t.avs = {"/api/v1/submit", fields};
  t.qa = {"/api/v1/submit", fields};
  t.status_path = "/api/v1/status";
  t.login_path = "/api/v1/login";
  t.login_token_field = "sessionId";
  return t;
}

RouteTable RouteTable::from_json(const json& j) {
  RouteTable t = defaults();
  if (j.contains("kis")) t.kis = route_from_json(j.at("kis"), t.kis);
  if (j.contains("avs")) t.avs = route_from_json(j.at("avs"), t.avs);
  if (j.contains("qa")) t.qa = route_from_json(j.at("qa"), t.qa);
  if (j.contains("status")) t.status_path = j.at("status").get<std::string>();
  if (j.contains("login")) {
    const json& login = j.at("login");
    if (login.contains("path")) t.login_path = login.at("path").get<std::string>();
    if (login.contains("tokenField")) {
      t.login_token_field = login.at("tokenField").get<std::string>();
    }
  }
  return t;
}

const RouteTemplate& RouteTable::for_task(TaskType t) const noexcept {
  switch (t) {
    case TaskType::KIS: return kis;
    case TaskType::AVS: return avs;
    case TaskType::QA: return qa;
  }
  return kis;
}

EvalLogSink stderr_log_sink() {
  return [](const json& line) {
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    std::cerr << line.dump() << '\n';
  };
}

EvalClient::EvalClient(EvalConfig config, EvalLogSink log)
    : config_(std::move(config)), log_(std::move(log)) {}

json EvalClient::submission_body(const Submission& s) const {
  const auto& fields = config_.routes.for_task(s.task).fields;
  const auto name = [&](const std::string& logical) {
    const auto it = fields.find(logical);
    return it == fields.end() ? logical : it->second;
  };
  json body{{name("session"), config_.session_token}};
  if (s.video_id) body[name("videoId")] = *s.video_id;
  if (s.time_ms) body[name("timeMs")] = *s.time_ms;
  if (s.text) body[name("text")] = *s.text;
  return body;
}

SubmissionReceipt EvalClient::submit(const Submission& s) const {
  const auto started = std::chrono::steady_clock::now();
  json line{{"event", "submit"},
            {"monoNs", monotonic_ns()},
            {"taskType", to_string(s.task)}};
  const auto finish = [&](const char* outcome, int status) {
    line["outcome"] = outcome;
    if (status != 0) line["status"] = status;
    line["elapsedMs"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    if (log_) log_(line);
  };

  try {
    validate(s);
    if (config_.base_url.empty()) {
      throw Error(Errc::ConfigMissing, "no evaluation server configured");
    }
  } catch (const Error&) {
    finish("invalid", 0);
    throw;
  }

  const RouteTemplate& route = config_.routes.for_task(s.task);
  ParsedUrl url;
  try {
    url = parse_base_url(config_.base_url);
  } catch (const Error&) {
    finish("invalid", 0);
    throw;
  }
  const std::string path =
      url.prefix + expand(expand(route.path, "session", config_.session_token),
                          "taskType", std::string(to_string(s.task)));

  auto client = make_client(url, config_.timeout_ms);
  const auto result =
      client.Post(path, submission_body(s).dump(), "application/json");
  if (!result) {
    finish("unreachable", 0);
    throw Error(Errc::UpstreamUnreachable,
                "evaluation server unreachable: " +
                    httplib::to_string(result.error()));
  }
  if (result->status >= 400) {
    finish("rejected", result->status);
    throw UpstreamRejected(result->status, result->body);
  }
  finish("ok", result->status);
  return {result->status, result->body};
}

std::string EvalClient::login(const std::string& username,
                              const std::string& password) const {
  if (config_.base_url.empty()) {
    throw Error(Errc::ConfigMissing, "no evaluation server configured");
  }
  const ParsedUrl url = parse_base_url(config_.base_url);
  auto client = make_client(url, config_.timeout_ms);
  const json body{{"username", username}, {"password", password}};
  const auto result = client.Post(url.prefix + config_.routes.login_path,
                                  body.dump(), "application/json");
  json line{{"event", "login"}, {"monoNs", monotonic_ns()}};
  if (!result) {
    line["outcome"] = "unreachable";
    if (log_) log_(line);
    throw Error(Errc::UpstreamUnreachable,
                "evaluation server unreachable: " +
                    httplib::to_string(result.error()));
  }
  line["status"] = result->status;
  line["outcome"] = result->status >= 400 ? "rejected" : "ok";
  if (log_) log_(line);
  if (result->status >= 400) throw UpstreamRejected(result->status, result->body);
  const json reply = json::parse(result->body, nullptr, false);
  const auto& field = config_.routes.login_token_field;
  if (!reply.is_object() || !reply.contains(field) || !reply.at(field).is_string()) {
    throw Error(Errc::InvalidRequest, "login response lacks '" + field + "'");
  }
  return reply.at(field).get<std::string>();
}

SubmissionReceipt EvalClient::status() const {
  if (config_.base_url.empty()) {
    throw Error(Errc::ConfigMissing, "no evaluation server configured");
  }
  const ParsedUrl url = parse_base_url(config_.base_url);
  const std::string path =
      url.prefix + expand(config_.routes.status_path, "session",
                          config_.session_token);
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    auto client = make_client(url, config_.timeout_ms);
    const auto result = client.Get(path);
    json line{{"event", "status"},
              {"monoNs", monotonic_ns()},
              {"attempt", attempt}};
    if (!result) {
      last_error = httplib::to_string(result.error());
      line["outcome"] = "unreachable";
      if (log_) log_(line);
      continue;
    }
    line["outcome"] = result->status >= 400 ? "rejected" : "ok";
    line["status"] = result->status;
    if (log_) log_(line);
    if (result->status >= 400) throw UpstreamRejected(result->status, result->body);
    return {result->status, result->body};
  }
  throw Error(Errc::UpstreamUnreachable,
              "evaluation server unreachable: " + last_error);
}

}  // namespace vidseek
