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

#include "vidseek/gateway_server.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/asio/thread_pool.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace vidseek {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

class WsSession;

struct ServerState {
  ServerState(const Dispatcher& d, ServerOptions o)
      : dispatcher(d),
        options(std::move(o)),
        ioc(),
        workers(options.worker_threads != 0
                    ? options.worker_threads
                    : std::max<std::size_t>(2, std::thread::hardware_concurrency())) {}

  const Dispatcher& dispatcher;
  ServerOptions options;

  std::atomic<std::size_t> in_flight{0};
  std::atomic<std::size_t> connections{0};
  std::atomic<bool> draining{false};
  std::mutex drain_mutex;
  std::condition_variable drain_cv;

  std::mutex sessions_mutex;
  std::set<std::weak_ptr<WsSession>, std::owner_less<std::weak_ptr<WsSession>>>
      sessions;

  // Declared last: destroying these runs pending handlers' destructors, which
  // touch the counters above.
  net::io_context ioc;
  net::thread_pool workers;

  void finish_one() {
    if (in_flight.fetch_sub(1) == 1) {
      std::lock_guard lock(drain_mutex);
      drain_cv.notify_all();
    }
  }
};

std::string request_id_of(const std::string& frame) {
  const json j = json::parse(frame, nullptr, false);
  if (j.is_object()) {
    const auto it = j.find("requestId");
    if (it != j.end() && it->is_string() && !it->get<std::string>().empty()) {
      return it->get<std::string>();
    }
  }
  return std::string(kUnknownRequestId);
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, ServerState& state)
      : ws_(std::move(socket)), state_(state) {
    ++state_.connections;
  }

  ~WsSession() {
    for (std::size_t i = 0; i < queue_.size(); ++i) state_.finish_one();
    --state_.connections;
  }

  void run(http::request<http::string_body> req) {
    ws_.set_option(
        websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.set_option(websocket::stream_base::decorator(
        [](websocket::response_type& res) {
          res.set(http::field::server, "vidseek");
        }));
    ws_.read_message_max(state_.options.max_frame_bytes);
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept,
                                                    shared_from_this()));
  }

  void close() {
    net::post(ws_.get_executor(), [self = shared_from_this()] {
      if (!self->ws_.is_open()) return;
      self->ws_.async_close(websocket::close_code::going_away,
                            [self](beast::error_code) {});
    });
  }

  // For peers that never answer the close frame.
  void force_close() {
    net::post(ws_.get_executor(), [self = shared_from_this()] {
      beast::get_lowest_layer(self->ws_).close();
    });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    {
      std::lock_guard lock(state_.sessions_mutex);
      state_.sessions.insert(weak_from_this());
    }
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read,
                                                      shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    std::string frame = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    ++state_.in_flight;
    if (state_.draining) {
      deliver(error_response(request_id_of(frame),
                             {{"code", kShuttingDown},
                              {"message", "server is shutting down"}})
                  .dump());
    } else {
      net::post(state_.workers, [self = shared_from_this(),
                                 frame = std::move(frame)]() mutable {
        std::string reply = self->state_.dispatcher.handle(frame);
        net::post(self->ws_.get_executor(),
                  [self, reply = std::move(reply)]() mutable {
                    self->deliver(std::move(reply));
                  });
      });
    }
    do_read();
  }

  void deliver(std::string message) {
    queue_.push_back(std::move(message));
    if (queue_.size() == 1) do_write();
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()),
                    beast::bind_front_handler(&WsSession::on_write,
                                              shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    queue_.pop_front();
    state_.finish_one();
    if (ec) {
      for (std::size_t i = 0; i < queue_.size(); ++i) state_.finish_one();
      queue_.clear();
      return;
    }
    if (!queue_.empty()) do_write();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  ServerState& state_;
  std::deque<std::string> queue_;
};

std::string_view mime_type(const std::filesystem::path& path) {
  static const std::map<std::string, std::string_view> kTypes = {
      {".html", "text/html; charset=utf-8"},
      {".js", "text/javascript; charset=utf-8"},
      {".css", "text/css; charset=utf-8"},
      {".json", "application/json"},
      {".svg", "image/svg+xml"},
      {".png", "image/png"},
      {".jpg", "image/jpeg"},
      {".jpeg", "image/jpeg"},
      {".webp", "image/webp"},
      {".mp4", "video/mp4"},
      {".webm", "video/webm"}};
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto it = kTypes.find(ext);
  return it == kTypes.end() ? std::string_view("application/octet-stream")
                            : it->second;
}

std::optional<std::string> percent_decode(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] != '%') {
      out.push_back(in[i]);
      continue;
    }
    if (i + 2 >= in.size()) return std::nullopt;
    const auto hex = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    const int hi = hex(in[i + 1]);
    const int lo = hex(in[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

/// Resolves `rel` under `root`, refusing anything that could escape it.
std::optional<std::filesystem::path> safe_join(const std::filesystem::path& root,
                                               std::string_view rel) {
  if (root.empty() || rel.empty()) return std::nullopt;
  if (rel.find('\\') != std::string_view::npos ||
      rel.find('\0') != std::string_view::npos) {
    return std::nullopt;
  }
  std::filesystem::path joined = root;
  std::size_t start = 0;
  while (start <= rel.size()) {
    const auto slash = rel.find('/', start);
    const auto part = rel.substr(start, slash == std::string_view::npos
                                            ? std::string_view::npos
                                            : slash - start);
    if (part.empty() || part == "." || part == "..") return std::nullopt;
    joined /= std::string(part);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  std::error_code ec;
  const auto canon_root = std::filesystem::canonical(root, ec);
  if (ec) return std::nullopt;
  const auto canon = std::filesystem::canonical(joined, ec);
  if (ec || !std::filesystem::is_regular_file(canon, ec)) return std::nullopt;
  const auto [r, c] = std::mismatch(canon_root.begin(), canon_root.end(),
                                    canon.begin(), canon.end());
  if (r != canon_root.end()) return std::nullopt;
  return canon;
}

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, ServerState& state)
      : stream_(std::move(socket)), state_(state) {}

  void run() {
    net::dispatch(stream_.get_executor(),
                  beast::bind_front_handler(&HttpSession::do_read,
                                            shared_from_this()));
  }

 private:
  void do_read() {
    parser_.emplace();
    parser_->body_limit(64 * 1024);
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, *parser_,
                     beast::bind_front_handler(&HttpSession::on_read,
                                               shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;
    auto req = parser_->release();
    const std::string target(req.target());
    const std::string path = target.substr(0, target.find('?'));

    if (websocket::is_upgrade(req)) {
      if (path == "/ws" && !state_.draining) {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), state_)
            ->run(std::move(req));
        return;
      }
      return send(text_response(req, http::status::not_found,
                                "no websocket endpoint at " + path));
    }
    route(std::move(req), path);
  }

  template <typename Body>
  http::response<http::string_body> text_response(
      const http::request<Body>& req, http::status status, std::string body,
      std::string_view type = "text/plain; charset=utf-8") {
    http::response<http::string_body> res{status, req.version()};
    res.set(http::field::server, "vidseek");
    res.set(http::field::content_type, std::string(type));
    res.keep_alive(req.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    if (req.method() == http::verb::head) res.body().clear();
    return res;
  }

  void route(http::request<http::string_body> req, const std::string& path) {
    if (req.method() != http::verb::get && req.method() != http::verb::head) {
      return send(text_response(req, http::status::method_not_allowed,
                                "method not allowed"));
    }
    if (path == "/healthz") {
      json health = state_.dispatcher.health();
      health["inFlight"] = state_.in_flight.load();
      health["connections"] = state_.connections.load();
      health["draining"] = state_.draining.load();
      return send(text_response(req, http::status::ok, health.dump(),
                                "application/json"));
    }
    const auto decoded = percent_decode(path);
    if (!decoded) {
      return send(text_response(req, http::status::bad_request, "bad path"));
    }
    constexpr std::string_view kMedia = "/media/";
    if (decoded->rfind(kMedia, 0) == 0) {
      return send_file(req, safe_join(state_.options.media_root,
                                      std::string_view(*decoded).substr(kMedia.size())));
    }
    if (state_.options.ui_root) {
      std::string rel = decoded->substr(1);
      if (rel.empty() || rel.back() == '/') rel += "index.html";
      return send_file(req, safe_join(*state_.options.ui_root, rel));
    }
    if (*decoded == "/") {
      return send(text_response(req, http::status::ok,
                                "vidseek gateway: websocket at /ws\n"));
    }
    send(text_response(req, http::status::not_found, "not found"));
  }

  void send_file(const http::request<http::string_body>& req,
                 const std::optional<std::filesystem::path>& file) {
    if (!file) {
      return send(text_response(req, http::status::not_found, "not found"));
    }
    beast::error_code ec;
    http::file_body::value_type body;
    body.open(file->c_str(), beast::file_mode::scan, ec);
    if (ec) return send(text_response(req, http::status::not_found, "not found"));
    const auto size = body.size();
    if (req.method() == http::verb::head) {
      http::response<http::empty_body> res{http::status::ok, req.version()};
      res.set(http::field::server, "vidseek");
      res.set(http::field::content_type, std::string(mime_type(*file)));
      res.content_length(size);
      res.keep_alive(req.keep_alive());
      return send(std::move(res));
    }
    http::response<http::file_body> res{
        std::piecewise_construct, std::make_tuple(std::move(body)),
        std::make_tuple(http::status::ok, req.version())};
    res.set(http::field::server, "vidseek");
    res.set(http::field::content_type, std::string(mime_type(*file)));
    res.content_length(size);
    res.keep_alive(req.keep_alive());
    send(std::move(res));
  }

  template <bool IsRequest, class Body, class Fields>
  void send(http::message<IsRequest, Body, Fields>&& msg) {
    auto sp = std::make_shared<http::message<IsRequest, Body, Fields>>(
        std::move(msg));
    response_ = sp;
    http::async_write(stream_, *sp,
                      beast::bind_front_handler(&HttpSession::on_write,
                                                shared_from_this(),
                                                sp->need_eof()));
  }

  void on_write(bool close, beast::error_code ec, std::size_t) {
    if (ec) return;
    if (close || state_.draining) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    response_.reset();
    do_read();
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  std::optional<http::request_parser<http::string_body>> parser_;
  ServerState& state_;
  std::shared_ptr<void> response_;
};

class Listener : public std::enable_shared_from_this<Listener> {
 public:
  Listener(ServerState& state, const tcp::endpoint& endpoint)
      : state_(state), acceptor_(net::make_strand(state.ioc)) {
    acceptor_.open(endpoint.protocol());
    acceptor_.set_option(net::socket_base::reuse_address(true));
    acceptor_.bind(endpoint);
    acceptor_.listen(net::socket_base::max_listen_connections);
    port_ = acceptor_.local_endpoint().port();
  }

  void run() { do_accept(); }

  void close() {
    net::post(acceptor_.get_executor(), [self = shared_from_this()] {
      beast::error_code ec;
      self->acceptor_.close(ec);
    });
  }

  std::uint16_t port() const noexcept { return port_; }

 private:
  void do_accept() {
    acceptor_.async_accept(net::make_strand(state_.ioc),
                           beast::bind_front_handler(&Listener::on_accept,
                                                     shared_from_this()));
  }

  void on_accept(beast::error_code ec, tcp::socket socket) {
    if (!acceptor_.is_open()) return;
    if (!ec) std::make_shared<HttpSession>(std::move(socket), state_)->run();
    do_accept();
  }

  ServerState& state_;
  tcp::acceptor acceptor_;
  std::uint16_t port_ = 0;
};

}  // namespace

struct GatewayServer::Impl {
  Impl(const Dispatcher& d, ServerOptions o) : state(d, std::move(o)) {}

  ServerState state;
  std::shared_ptr<Listener> listener;
  std::vector<std::thread> io_threads;
  std::mutex lifecycle;
  bool running = false;
};

GatewayServer::GatewayServer(const Dispatcher& dispatcher, ServerOptions options)
    : impl_(std::make_unique<Impl>(dispatcher, std::move(options))) {}

GatewayServer::~GatewayServer() { stop(); }

void GatewayServer::start() {
  std::lock_guard lock(impl_->lifecycle);
  if (impl_->running) return;
  auto& st = impl_->state;
  const auto address = net::ip::make_address(st.options.address);
  impl_->listener =
      std::make_shared<Listener>(st, tcp::endpoint(address, st.options.port));
  impl_->listener->run();
  const std::size_t n = std::max<std::size_t>(1, st.options.io_threads);
  for (std::size_t i = 0; i < n; ++i) {
    impl_->io_threads.emplace_back([&st] { st.ioc.run(); });
  }
  impl_->running = true;
}

std::uint16_t GatewayServer::port() const {
  return impl_->listener ? impl_->listener->port() : 0;
}

void GatewayServer::stop() {
  std::lock_guard lock(impl_->lifecycle);
  if (!impl_->running) return;
  auto& st = impl_->state;
  st.draining = true;
  impl_->listener->close();
  {
    std::unique_lock drain(st.drain_mutex);
    st.drain_cv.wait_for(drain, st.options.drain_timeout,
                         [&] { return st.in_flight.load() == 0; });
  }
  std::vector<std::weak_ptr<WsSession>> open;
  {
    std::lock_guard sessions(st.sessions_mutex);
    open.assign(st.sessions.begin(), st.sessions.end());
    st.sessions.clear();
  }
  for (const auto& weak : open) {
    if (auto s = weak.lock()) s->close();
  }
  const auto wait_closed = [&st](std::chrono::milliseconds budget) {
    const auto deadline = std::chrono::steady_clock::now() + budget;
    while (st.connections.load() != 0 && std::chrono::steady_clock::now() < deadline) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  };
  wait_closed(std::chrono::milliseconds(1000));
  for (const auto& weak : open) {
    if (auto s = weak.lock()) s->force_close();
  }
  wait_closed(std::chrono::milliseconds(500));
  st.ioc.stop();
  for (auto& t : impl_->io_threads) t.join();
  impl_->io_threads.clear();
  st.workers.join();
  impl_->running = false;
}

std::size_t GatewayServer::in_flight() const { return impl_->state.in_flight.load(); }
std::size_t GatewayServer::connections() const {
  return impl_->state.connections.load();
}

}  // namespace vidseek
