#pragma once

/// @file bridge.hpp
/// WebSocket bridge: the line protocol over text frames, one Session per connection.
///
/// Each text frame carries one or more newline-separated commands; every response line is sent
/// as its own text frame. The bridge pushes a "state" frame on connect and after every position
/// change. Binary frames and frames holding control characters are answered with an error frame.

#include <cstdint>
#include <memory>
#include <stdexcept>

#include "zatrikion/board.hpp"

namespace zatrikion {

class BridgeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Bridge {
public:
    /// Binds 127.0.0.1:port (0 picks a free port). Throws BridgeError when the port is taken.
    Bridge(std::uint16_t port, Variant variant);
    ~Bridge();
    Bridge(const Bridge&) = delete;
    Bridge& operator=(const Bridge&) = delete;

    [[nodiscard]] std::uint16_t port() const noexcept;

    /// Starts accepting connections on a background thread.
    void start();
    /// Closes the listener and every open connection, then joins all threads.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace zatrikion
