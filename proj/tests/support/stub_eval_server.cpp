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

#include "stub_eval_server.hpp"

#include <stdexcept>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace vidseek::testing {

struct StubEvalServer::Impl {
  httplib::Server server;
};

StubEvalServer::StubEvalServer() : StubEvalServer(Options{}) {}

StubEvalServer::StubEvalServer(Options options)
    : impl_(std::make_unique<Impl>()), options_(std::move(options)) {}

StubEvalServer::~StubEvalServer() { stop(); }

void StubEvalServer::start(std::uint16_t port) {
  auto& srv = impl_->server;
  srv.Post("/api/v1/submit", [this](const httplib::Request& req,
                                    httplib::Response& res) {
    const std::size_t index = submits_.fetch_add(1);
    {
      std::lock_guard lock(mutex_);
      received_.push_back({req.path, req.body});
    }
    if (options_.delay) std::this_thread::sleep_for(options_.delay(index));
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (!body.is_object() || body.value("session", "") != options_.session) {
      res.status = 401;
      res.set_content(R"({"status":"unauthorized"})", "application/json");
      return;
    }
    std::lock_guard lock(mutex_);
    res.status = options_.status;
    res.set_content(options_.body, "application/json");
  });
  srv.Post("/api/v1/login", [this](const httplib::Request& req,
                                   httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (!body.is_object() || !body.contains("username")) {
      res.status = 400;
      return;
    }
    res.set_content(nlohmann::json{{"sessionId", options_.session}}.dump(),
                    "application/json");
  });
  srv.Get("/api/v1/status", [this](const httplib::Request&, httplib::Response& res) {
    ++statuses_;
    res.set_content(R"({"status":"ok"})", "application/json");
  });

  if (port == 0) {
    const int bound = srv.bind_to_any_port("127.0.0.1");
    if (bound <= 0) throw std::runtime_error("stub eval server: bind failed");
    port_ = static_cast<std::uint16_t>(bound);
  } else {
    if (!srv.bind_to_port("127.0.0.1", port)) {
      throw std::runtime_error("stub eval server: bind failed");
    }
    port_ = port;
  }
  thread_ = std::thread([&srv] { srv.listen_after_bind(); });
  srv.wait_until_ready();
}

void StubEvalServer::stop() {
  if (thread_.joinable()) {
    impl_->server.stop();
    thread_.join();
  }
}

std::string StubEvalServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

std::vector<StubEvalServer::Received> StubEvalServer::received() const {
  std::lock_guard lock(mutex_);
  return received_;
}

void StubEvalServer::set_status(int status, std::string body) {
  std::lock_guard lock(mutex_);
  options_.status = status;
  options_.body = std::move(body);
}

}  // namespace vidseek::testing
