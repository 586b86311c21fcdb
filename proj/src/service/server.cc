// Copyright 2026 The Demoforge Authors
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

#include "demoforge/service/server.h"

#include <chrono>
#include <deque>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "demoforge/common/error.h"
#include "demoforge/recording/container.h"
#include "demoforge/service/protocol.h"

namespace demoforge::service {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

constexpr std::string_view kSessionPrefix = "/session/";

class SessionHost : public std::enable_shared_from_this<SessionHost> {
 public:
  SessionHost(asio::io_context& ioc, std::unique_ptr<Session> session)
      : session_(std::move(session)),
        strand_(asio::make_strand(ioc)),
        timer_(strand_) {}

  void start() {
    next_ = std::chrono::steady_clock::now();
    schedule();
  }
  void stop() {
    asio::post(strand_, [self = shared_from_this()] {
      self->stopped_ = true;
      self->timer_.cancel();
    });
  }

  template <typename F>
  void post(F&& f) {
    asio::post(strand_, std::forward<F>(f));
  }
  Session& session() { return *session_; }

 private:
  void schedule() {
    next_ += std::chrono::milliseconds(session_->config().tick_ms);
    timer_.expires_at(next_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->stopped_) return;
      self->session_->tick();
      self->schedule();
    });
  }

  std::unique_ptr<Session> session_;
  asio::strand<asio::io_context::executor_type> strand_;
  asio::steady_timer timer_;
  std::chrono::steady_clock::time_point next_;
  bool stopped_ = false;
};

class Connection;

struct Registry {
  asio::io_context& ioc;
  ServerConfig config;
  std::shared_ptr<const recording::Recording> recording;
  std::mutex mu;
  std::map<std::string, std::shared_ptr<SessionHost>> sessions;

  std::shared_ptr<SessionHost> get(const std::string& id) {
    std::lock_guard lock(mu);
    auto it = sessions.find(id);
    if (it != sessions.end()) return it->second;
    auto session = recording ? std::make_unique<Session>(id, config.session,
                                                         recording)
                             : std::make_unique<Session>(id, config.session);
    auto host = std::make_shared<SessionHost>(ioc, std::move(session));
    host->start();
    sessions.emplace(id, host);
    return host;
  }

  void stop_all() {
    std::lock_guard lock(mu);
    for (auto& [id, host] : sessions) host->stop();
  }
};

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, Registry& registry)
      : ws_(std::move(socket)), registry_(registry) {}

  void start() {
    asio::dispatch(ws_.get_executor(), [self = shared_from_this()] {
      self->read_request();
    });
  }

  // Thread-safe.
  void send(std::string text) {
    asio::post(ws_.get_executor(),
               [self = shared_from_this(), text = std::move(text)]() mutable {
                 self->queue_.push_back(std::move(text));
                 if (self->queue_.size() == 1) self->write_next();
               });
  }

 private:
  void read_request() {
    http::async_read(
        beast::get_lowest_layer(ws_), buffer_, request_,
        [self = shared_from_this()](beast::error_code ec, size_t) {
          if (ec) return;
          self->on_request();
        });
  }

  void on_request() {
    const std::string target(request_.target());
    const bool valid = websocket::is_upgrade(request_) &&
                       target.starts_with(kSessionPrefix) &&
                       target.size() > kSessionPrefix.size() &&
                       target.find('/', kSessionPrefix.size()) ==
                           std::string::npos;
    if (!valid) {
      auto res = std::make_shared<http::response<http::string_body>>(
          http::status::not_found, request_.version());
      res->set(http::field::content_type, "text/plain");
      res->body() = "expected a WebSocket upgrade on /session/{id}\n";
      res->prepare_payload();
      http::async_write(beast::get_lowest_layer(ws_), *res,
                        [self = shared_from_this(), res](beast::error_code,
                                                         size_t) {
                          beast::error_code ignored;
                          beast::get_lowest_layer(self->ws_).socket().shutdown(
                              tcp::socket::shutdown_send, ignored);
                        });
      return;
    }
    session_id_ = target.substr(kSessionPrefix.size());
    ws_.async_accept(request_, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->attach();
    });
  }

  void attach() {
    try {
      host_ = registry_.get(session_id_);
    } catch (const std::exception& e) {
      send(error_message(kInvalidRequest, e.what()).dump());
      return;
    }
    std::weak_ptr<Connection> weak = shared_from_this();
    host_->post([self = shared_from_this(), weak] {
      self->token_ = self->host_->session().subscribe(
          [weak](const std::string& text) {
            if (auto c = weak.lock()) c->send(text);
          });
      // Reads start only after the subscription so replies follow hello.
      asio::post(self->ws_.get_executor(), [self] { self->read_message(); });
    });
  }

  void read_message() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec,
                                                        size_t) {
      if (ec) {
        self->detach();
        return;
      }
      std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->host_->post([self, text = std::move(text)] {
        self->host_->session().handle_message(
            text, [self](const std::string& reply) { self->send(reply); });
      });
      self->read_message();
    });
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, size_t) {
                      if (ec) {
                        self->queue_.clear();
                        return;
                      }
                      self->queue_.pop_front();
                      if (!self->queue_.empty()) self->write_next();
                    });
  }

  void detach() {
    if (!host_ || token_ < 0) return;
    host_->post([host = host_, token = token_] {
      host->session().unsubscribe(token);
    });
    token_ = -1;
  }

  websocket::stream<beast::tcp_stream> ws_;
  Registry& registry_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  std::deque<std::string> queue_;
  std::string session_id_;
  std::shared_ptr<SessionHost> host_;
  int token_ = -1;
};

}  // namespace

void ServerConfig::validate() const {
  if (threads < 1) throw InvalidArgumentError("threads must be >= 1");
  session.validate();
}

struct Server::Impl {
  explicit Impl(ServerConfig cfg)
      : acceptor(ioc),
        registry{ioc, std::move(cfg), nullptr, {}, {}} {}

  void accept() {
    acceptor.async_accept(asio::make_strand(ioc),
                          [this](beast::error_code ec, tcp::socket socket) {
                            if (ec) return;
                            std::make_shared<Connection>(std::move(socket),
                                                         registry)
                                ->start();
                            accept();
                          });
  }

  asio::io_context ioc;
  tcp::acceptor acceptor;
  Registry registry;
  std::vector<std::thread> threads;
};

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>(config)) {
  config.validate();
  if (config.recording) {
    impl_->registry.recording = std::make_shared<const recording::Recording>(
        recording::read_recording(*config.recording));
  }
  // Fail fast on an unknown task.
  Session probe("probe", config.session);
  try {
    const tcp::endpoint ep(asio::ip::make_address(config.host), config.port);
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen();
  } catch (const boost::system::system_error& e) {
    throw Error("cannot listen on " + config.host + ":" +
                std::to_string(config.port) + ": " + e.code().message());
  }
  impl_->accept();
}

Server::~Server() { stop(); }

uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() { impl_->ioc.run(); }

void Server::start() {
  for (int i = 0; i < impl_->registry.config.threads; ++i) {
    impl_->threads.emplace_back([this] { impl_->ioc.run(); });
  }
}

void Server::stop() {
  if (!impl_) return;
  asio::post(impl_->ioc, [this] {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
  });
  impl_->registry.stop_all();
  impl_->ioc.stop();
  for (auto& t : impl_->threads) {
    if (t.joinable()) t.join();
  }
  impl_->threads.clear();
}

}  // namespace demoforge::service
