#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <type_traits>

#include "sentry/centre/core.hpp"

namespace sentry::centre {

struct ServerOptions {
  /// Stop by itself after this many seconds.
  std::optional<double> duration_s;
  /// Stop on SIGINT / SIGTERM.
  bool handle_signals = false;
};

/// TCP protocol endpoint on listen_port and the console bridge (WebSocket
/// plus static files from console_dir) on listen_port + 1, both served with
/// the frame loop on one io_context thread. With listen_port 0 both ports
/// are ephemeral.
class Server {
 public:
  /// Binds both ports; throws std::system_error when a port is busy.
  Server(Centre centre, ServerOptions options = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t tcp_port() const noexcept;
  std::uint16_t ws_port() const noexcept;

  /// Serves until stop() or the configured duration; blocks the caller.
  void run();
  /// Safe from any thread.
  void stop();

  /// Runs `fn` on the server thread and waits for it. Only while run() is
  /// active on another thread.
  template <typename F>
  auto with_centre(F&& fn) -> std::invoke_result_t<F, Centre&> {
    using R = std::invoke_result_t<F, Centre&>;
    if constexpr (std::is_void_v<R>) {
      call_on_loop([&](Centre& c) { fn(c); });
    } else {
      std::optional<R> out;
      call_on_loop([&](Centre& c) { out.emplace(fn(c)); });
      return std::move(*out);
    }
  }

  /// Direct access; only when run() is not active.
  Centre& centre() noexcept;

  struct Impl;

 private:
  void call_on_loop(const std::function<void(Centre&)>& fn);
  std::shared_ptr<Impl> impl_;
};

}  // namespace sentry::centre
