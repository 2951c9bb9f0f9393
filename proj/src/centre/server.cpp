#include "sentry/centre/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <system_error>

namespace sentry::centre {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

class Peer;

}  // namespace

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  Impl(Centre c, ServerOptions o)
      : centre(std::move(c)),
        options(o),
        tcp_acceptor(io),
        ws_acceptor(io),
        frame_timer(io),
        stop_timer(io),
        signals(io),
        started(std::chrono::steady_clock::now()) {}

  std::int64_t now_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 started)
        .count();
  }

  void listen(tcp::acceptor& acceptor, std::uint16_t port) {
    const tcp::endpoint ep(asio::ip::address_v4::any(), port);
    boost::system::error_code ec;
    acceptor.open(ep.protocol(), ec);
    if (!ec) acceptor.set_option(tcp::acceptor::reuse_address(true), ec);
    if (!ec) acceptor.bind(ep, ec);
    if (!ec) acceptor.listen(asio::socket_base::max_listen_connections, ec);
    if (ec)
      throw std::system_error(std::error_code(ec.value(), std::system_category()),
                              "listen on port " + std::to_string(port));
  }

  void start();
  void accept_tcp();
  void accept_ws();
  void schedule_tick();
  void pump_all();
  void shutdown();

  asio::io_context io;
  Centre centre;
  ServerOptions options;
  tcp::acceptor tcp_acceptor;
  tcp::acceptor ws_acceptor;
  asio::steady_timer frame_timer;
  asio::steady_timer stop_timer;
  asio::signal_set signals;
  std::chrono::steady_clock::time_point started;
  std::chrono::steady_clock::time_point next_tick;
  std::map<SessionId, std::shared_ptr<Peer>> peers;
  bool stopping = false;
};

namespace {

// One protocol session over some byte transport.
class Peer : public std::enable_shared_from_this<Peer> {
 public:
  Peer(Server::Impl& server, SessionId id) : server_(server), id_(id) {}
  virtual ~Peer() = default;

  virtual void start() = 0;

  /// Writes the next queued message, or finishes a closing session.
  void pump() {
    if (writing_ || finished_ || !transport_ready_) return;
    auto& queue = server_.centre.outbound(id_);
    if (auto m = queue.pop()) {
      writing_ = true;
      auto bytes = std::make_shared<std::vector<std::uint8_t>>(proto::encode_message(*m));
      send(bytes, [self = shared_from_this(), bytes](beast::error_code ec) {
        self->writing_ = false;
        if (ec) {
          self->finish();
          return;
        }
        self->pump();
      });
      return;
    }
    if (closing_) finish();
  }

  void finish() {
    if (finished_) return;
    finished_ = true;
    close_transport();
    server_.centre.close_session(id_);
    server_.peers.erase(id_);
  }

 protected:
  virtual void send(std::shared_ptr<std::vector<std::uint8_t>> bytes,
                    std::function<void(beast::error_code)> done) = 0;
  virtual void close_transport() = 0;

  void on_bytes(std::span<const std::uint8_t> bytes) {
    if (closing_ || finished_) return;
    reader_.feed(bytes);
    while (!closing_) {
      auto next = reader_.next();
      if (auto* m = std::get_if<proto::ControlMessage>(&next)) {
        if (!server_.centre.receive(id_, *m, server_.now_ms())) closing_ = true;
      } else if (std::holds_alternative<proto::ProtocolError>(next)) {
        server_.centre.fail_session(id_);
        closing_ = true;
      } else {
        break;
      }
    }
    pump();
  }

  void on_read_error() {
    closing_ = true;
    if (!writing_) finish();
  }

  bool closing() const noexcept { return closing_; }

  Server::Impl& server_;
  SessionId id_;
  bool transport_ready_ = true;

 private:
  proto::MessageReader reader_;
  bool writing_ = false;
  bool closing_ = false;
  bool finished_ = false;
};

class TcpPeer final : public Peer {
 public:
  TcpPeer(Server::Impl& server, SessionId id, tcp::socket socket)
      : Peer(server, id), socket_(std::move(socket)) {
    socket_.set_option(tcp::no_delay(true));
  }

  void start() override { read(); }

 private:
  void read() {
    socket_.async_read_some(asio::buffer(buffer_),
                            [self = std::static_pointer_cast<TcpPeer>(shared_from_this())](
                                beast::error_code ec, std::size_t n) {
                              if (ec) {
                                self->on_read_error();
                                return;
                              }
                              self->on_bytes(std::span(self->buffer_.data(), n));
                              if (!self->closing()) self->read();
                            });
  }

  void send(std::shared_ptr<std::vector<std::uint8_t>> bytes,
            std::function<void(beast::error_code)> done) override {
    asio::async_write(socket_, asio::buffer(*bytes),
                      [done = std::move(done)](beast::error_code ec, std::size_t) { done(ec); });
  }

  void close_transport() override {
    beast::error_code ignored;
    socket_.shutdown(tcp::socket::shutdown_both, ignored);
    socket_.close(ignored);
  }

  tcp::socket socket_;
  std::array<std::uint8_t, 64 * 1024> buffer_{};
};

class WsPeer final : public Peer {
 public:
  WsPeer(Server::Impl& server, SessionId id, beast::tcp_stream stream)
      : Peer(server, id), ws_(std::move(stream)) {
    transport_ready_ = false;
  }

  void start() override {}

  void accept(http::request<http::string_body> req) {
    beast::get_lowest_layer(ws_).expires_never();
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.binary(true);
    ws_.read_message_max(proto::kHeaderSize + proto::kMaxPayload);
    ws_.async_accept(req, [self = std::static_pointer_cast<WsPeer>(shared_from_this())](
                              beast::error_code ec) {
      if (ec) {
        self->on_read_error();
        return;
      }
      self->transport_ready_ = true;
      self->read();
      self->pump();
    });
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = std::static_pointer_cast<WsPeer>(shared_from_this())](
                                beast::error_code ec, std::size_t) {
      if (ec) {
        self->on_read_error();
        return;
      }
      const auto data = self->buffer_.cdata();
      self->on_bytes(std::span(static_cast<const std::uint8_t*>(data.data()), data.size()));
      self->buffer_.consume(self->buffer_.size());
      if (!self->closing()) self->read();
    });
  }

  void send(std::shared_ptr<std::vector<std::uint8_t>> bytes,
            std::function<void(beast::error_code)> done) override {
    ws_.async_write(asio::buffer(*bytes),
                    [done = std::move(done)](beast::error_code ec, std::size_t) { done(ec); });
  }

  void close_transport() override {
    if (ws_.is_open()) {
      ws_.async_close(websocket::close_code::normal,
                      [self = shared_from_this()](beast::error_code) {});
    } else {
      beast::error_code ignored;
      beast::get_lowest_layer(ws_).socket().close(ignored);
    }
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
};

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

/// Maps a request target onto a file below `root`; nullopt for anything that
/// would escape it.
std::optional<std::filesystem::path> static_path(const std::filesystem::path& root,
                                                 std::string_view target) {
  if (root.empty() || target.empty() || target.front() != '/') return std::nullopt;
  target = target.substr(0, target.find_first_of("?#"));
  std::filesystem::path rel;
  std::size_t pos = 1;
  while (pos <= target.size()) {
    const auto slash = target.find('/', pos);
    const auto seg = target.substr(pos, slash == std::string_view::npos ? target.npos : slash - pos);
    pos = slash == std::string_view::npos ? target.size() + 1 : slash + 1;
    if (seg.empty() || seg == ".") continue;
    if (seg == ".." || seg.find('\\') != seg.npos || seg.find('%') != seg.npos ||
        seg.find('\0') != seg.npos)
      return std::nullopt;
    rel /= std::string(seg);
  }
  auto full = root / rel;
  std::error_code ec;
  if (std::filesystem::is_directory(full, ec)) full /= "index.html";
  return full;
}

/// Reads one HTTP request on the bridge port: upgrades to a WebSocket
/// session or answers with a static file.
class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(Server::Impl& server, tcp::socket socket)
      : server_(server), stream_(std::move(socket)) {}

  void start() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (!ec) self->handle();
                     });
  }

 private:
  void handle() {
    if (websocket::is_upgrade(req_)) {
      const SessionId id = server_.centre.open_session();
      auto peer = std::make_shared<WsPeer>(server_, id, std::move(stream_));
      server_.peers.emplace(id, peer);
      peer->accept(std::move(req_));
      return;
    }
    auto res = std::make_shared<http::response<http::string_body>>();
    res->version(req_.version());
    res->keep_alive(false);
    res->set(http::field::server, "sentry");
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      res->result(http::status::method_not_allowed);
      res->set(http::field::allow, "GET, HEAD");
      res->body() = "method not allowed\n";
      res->set(http::field::content_type, "text/plain");
    } else if (const auto path = static_path(server_.centre.config().console_dir,
                                             std::string_view(req_.target().data(), req_.target().size()));
               path && std::filesystem::is_regular_file(*path)) {
      std::ifstream in(*path, std::ios::binary);
      std::ostringstream body;
      body << in.rdbuf();
      res->result(http::status::ok);
      res->set(http::field::content_type, std::string(mime_type(*path)));
      res->body() = body.str();
    } else {
      res->result(http::status::not_found);
      res->set(http::field::content_type, "text/plain");
      res->body() = "not found\n";
    }
    res->prepare_payload();
    if (req_.method() == http::verb::head) res->body().clear();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  Server::Impl& server_;
  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

}  // namespace

void Server::Impl::start() {
  accept_tcp();
  accept_ws();
  next_tick = std::chrono::steady_clock::now();
  schedule_tick();
  if (options.duration_s) {
    stop_timer.expires_after(std::chrono::milliseconds(std::int64_t(*options.duration_s * 1000.0)));
    stop_timer.async_wait([this](beast::error_code ec) {
      if (!ec) shutdown();
    });
  }
  if (options.handle_signals) {
    signals.add(SIGINT);
    signals.add(SIGTERM);
    signals.async_wait([this](beast::error_code ec, int) {
      if (!ec) shutdown();
    });
  }
}

void Server::Impl::accept_tcp() {
  tcp_acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (stopping) return;
    if (!ec) {
      const SessionId id = centre.open_session();
      auto peer = std::make_shared<TcpPeer>(*this, id, std::move(socket));
      peers.emplace(id, peer);
      peer->start();
    }
    accept_tcp();
  });
}

void Server::Impl::accept_ws() {
  ws_acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (stopping) return;
    if (!ec) std::make_shared<HttpConnection>(*this, std::move(socket))->start();
    accept_ws();
  });
}

void Server::Impl::schedule_tick() {
  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / centre.config().frame_rate));
  next_tick += period;
  frame_timer.expires_at(next_tick);
  frame_timer.async_wait([this](beast::error_code ec) {
    if (ec || stopping) return;
    centre.tick(now_ms());
    pump_all();
    // After a stall, resynchronise instead of firing a burst of ticks.
    if (std::chrono::steady_clock::now() - next_tick > std::chrono::seconds(1))
      next_tick = std::chrono::steady_clock::now();
    schedule_tick();
  });
}

void Server::Impl::pump_all() {
  // pump() may erase from the map.
  std::vector<std::shared_ptr<Peer>> snapshot;
  snapshot.reserve(peers.size());
  for (auto& [id, p] : peers) snapshot.push_back(p);
  for (auto& p : snapshot) p->pump();
}

void Server::Impl::shutdown() {
  if (stopping) return;
  stopping = true;
  beast::error_code ignored;
  tcp_acceptor.close(ignored);
  ws_acceptor.close(ignored);
  frame_timer.cancel();
  stop_timer.cancel();
  signals.cancel(ignored);
  std::vector<std::shared_ptr<Peer>> snapshot;
  for (auto& [id, p] : peers) snapshot.push_back(p);
  for (auto& p : snapshot) p->finish();
  io.stop();
}

Server::Server(Centre centre, ServerOptions options)
    : impl_(std::make_shared<Impl>(std::move(centre), options)) {
  const std::uint16_t port = impl_->centre.config().listen_port;
  impl_->listen(impl_->tcp_acceptor, port);
  impl_->listen(impl_->ws_acceptor, port == 0 ? 0 : std::uint16_t(port + 1));
}

Server::~Server() {
  if (impl_) impl_->centre.stop_recording();
}

std::uint16_t Server::tcp_port() const noexcept { return impl_->tcp_acceptor.local_endpoint().port(); }
std::uint16_t Server::ws_port() const noexcept { return impl_->ws_acceptor.local_endpoint().port(); }

void Server::run() {
  impl_->start();
  impl_->io.run();
}

void Server::stop() {
  asio::post(impl_->io, [impl = impl_] { impl->shutdown(); });
}

Centre& Server::centre() noexcept { return impl_->centre; }

void Server::call_on_loop(const std::function<void(Centre&)>& fn) {
  std::promise<void> done;
  auto fut = done.get_future();
  asio::post(impl_->io, [&] {
    try {
      fn(impl_->centre);
      impl_->pump_all();
      done.set_value();
    } catch (...) {
      done.set_exception(std::current_exception());
    }
  });
  fut.get();
}

}  // namespace sentry::centre
