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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "vidseek/protocol.hpp"

namespace vidseek {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 0;          // 0 picks an ephemeral port
  std::size_t io_threads = 1;
  std::size_t worker_threads = 0;  // 0: max(2, hardware threads)
  std::filesystem::path media_root;          // served under /media/
  std::optional<std::filesystem::path> ui_root;  // served under /
  std::size_t max_frame_bytes = 1 << 20;
  std::chrono::milliseconds drain_timeout{5000};
};

/// Reply code for frames that arrive after stop() began.
inline constexpr std::string_view kShuttingDown = "ShuttingDown";

/// Websocket gateway on /ws plus plain HTTP /healthz and /media/. Requests on
/// one connection are dispatched concurrently; responses are written in
/// completion order.
class GatewayServer {
 public:
  GatewayServer(const Dispatcher& dispatcher, ServerOptions options);
  ~GatewayServer();

  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  /// Binds and starts serving. Throws std::system_error subclasses on bind
  /// failure.
  void start();
  std::uint16_t port() const;

  /// Stops accepting, answers every request already received (up to
  /// drain_timeout), then closes connections. Idempotent.
  void stop();

  std::size_t in_flight() const;
  std::size_t connections() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vidseek
