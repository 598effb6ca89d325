#include "zatrikion/bridge.hpp"

#include <sys/socket.h>

#include <atomic>
#include <list>
#include <mutex>
#include <string>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "zatrikion/protocol.hpp"

namespace zatrikion {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

bool well_formed(std::string_view text) {
    for (const char c : text)
        if (static_cast<unsigned char>(c) < 0x20 && c != '\n' && c != '\r' && c != '\t') return false;
    return true;
}

}  // namespace

struct Bridge::Impl {
    struct Connection {
        int fd = -1;
        std::thread thread;
        std::atomic<bool> done{false};
    };

    asio::io_context io;
    tcp::acceptor acceptor{io};
    Variant variant;
    std::thread listener;
    std::atomic<bool> stopping{false};
    std::mutex mutex;
    std::list<Connection> connections;

    void accept_loop() {
        while (!stopping) {
            tcp::socket socket(io);
            beast::error_code ec;
            acceptor.accept(socket, ec);
            if (ec) {
                if (stopping) return;
                continue;
            }
            const std::lock_guard lock(mutex);
            reap();
            if (stopping) return;
            Connection& c = connections.emplace_back();
            c.fd = socket.native_handle();
            c.thread = std::thread([this, &c, s = std::move(socket)]() mutable {
                serve(std::move(s));
                c.done = true;
            });
        }
    }

    void reap() {
        for (auto it = connections.begin(); it != connections.end();) {
            if (it->done) {
                it->thread.join();
                it = connections.erase(it);
            } else {
                ++it;
            }
        }
    }

    void serve(tcp::socket socket) {
        try {
            websocket::stream<tcp::socket> ws(std::move(socket));
            ws.accept();
            ws.text(true);
            auto send = [&ws](const std::string& line) { ws.write(asio::buffer(line)); };
            Session::Options options;
            options.variant = variant;
            options.push_state = true;
            Session session(send, options);
            send(session.state_line());
            beast::flat_buffer buffer;
            for (;;) {
                buffer.clear();
                ws.read(buffer);
                if (!ws.got_text()) {
                    send("error malformed-frame binary frames are not accepted");
                    continue;
                }
                const std::string text = beast::buffers_to_string(buffer.data());
                if (!well_formed(text)) {
                    send("error malformed-frame control characters in frame");
                    continue;
                }
                std::size_t start = 0;
                bool open = true;
                while (open && start <= text.size()) {
                    const std::size_t end = std::min(text.find('\n', start), text.size());
                    open = session.handle(std::string_view(text).substr(start, end - start));
                    start = end + 1;
                }
                if (!open) {
                    ws.close(websocket::close_code::normal);
                    return;
                }
            }
        } catch (const std::exception&) {
            // peer went away
        }
    }
};

Bridge::Bridge(std::uint16_t port, Variant variant) : impl_(std::make_unique<Impl>()) {
    impl_->variant = variant;
    beast::error_code ec;
    const tcp::endpoint endpoint(asio::ip::make_address("127.0.0.1"), port);
    impl_->acceptor.open(endpoint.protocol(), ec);
    if (!ec) impl_->acceptor.set_option(asio::socket_base::reuse_address(true), ec);
    if (!ec) impl_->acceptor.bind(endpoint, ec);
    if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
    if (ec) throw BridgeError("cannot listen on port " + std::to_string(port) + ": " + ec.message());
}

Bridge::~Bridge() { stop(); }

std::uint16_t Bridge::port() const noexcept {
    beast::error_code ec;
    return impl_->acceptor.local_endpoint(ec).port();
}

void Bridge::start() {
    if (impl_->listener.joinable() || impl_->stopping) return;
    impl_->listener = std::thread([this] { impl_->accept_loop(); });
}

void Bridge::stop() {
    if (impl_->stopping.exchange(true)) return;
    ::shutdown(impl_->acceptor.native_handle(), SHUT_RDWR);
    if (impl_->listener.joinable()) impl_->listener.join();
    beast::error_code ec;
    impl_->acceptor.close(ec);
    const std::lock_guard lock(impl_->mutex);
    for (auto& c : impl_->connections)
        if (!c.done) ::shutdown(c.fd, SHUT_RDWR);
    for (auto& c : impl_->connections) c.thread.join();
    impl_->connections.clear();
}

}  // namespace zatrikion
