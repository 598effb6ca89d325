#pragma once

/// @file protocol.hpp
/// Line protocol shared by the stdio front end and the WebSocket bridge.
///
///   variant <name>                       select variant, reset to its start position
///   position start|cfen <5 fields> [moves <m>...]
///   move <m>                             apply one move ("error illegal-move" otherwise)
///   go depth N | movetime MS | nodes N [seed S]   info lines, then "bestmove <m>"
///   stop                                 interrupt a running search
///   perft N | eval | status | state | isready
///   selfplay <config-file> [out <path>]  run a match, answer with the stats path
///   serve --port P                       start the WebSocket bridge (stdio only)
///   quit
///
/// With push_state, every position change is followed by "state ..."; a move that annihilates
/// pawns is preceded by "event annihilation <sq>..." with the squares in index order.

#include <atomic>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include "zatrikion/board.hpp"
#include "zatrikion/search.hpp"

namespace zatrikion {

class Session {
public:
    using Emit = std::function<void(const std::string& line)>;
    /// Starts a bridge on the port and returns the response line, or throws.
    using ServeHook = std::function<std::string(int port)>;

    struct Options {
        Variant variant = Variant::ByzantineRegular;
        bool async_go = false;    // run "go" on a helper thread so "stop" stays responsive
        bool push_state = false;  // send "state" (and "event") lines after every position change
        ServeHook serve;
    };

    Session(Emit emit, Options options);
    ~Session();
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    /// Processes one command line. Returns false once "quit" is received.
    bool handle(std::string_view line);

    /// Blocks until a running search has reported its bestmove.
    void wait();
    [[nodiscard]] bool searching() const noexcept { return searching_.load(); }

    [[nodiscard]] Variant variant() const noexcept { return position_.variant(); }
    [[nodiscard]] const Position& position() const noexcept { return position_; }
    /// "state <cfen> <status> <legal moves...>"; status is "ongoing" or "<result>:<reason>", e.g. "1-0:bare-king".
    [[nodiscard]] std::string state_line() const;

private:
    void cmd_variant(std::string_view args);
    void cmd_position(std::string_view args);
    void cmd_move(std::string_view args);
    void cmd_go(std::string_view args);
    void cmd_perft(std::string_view args);
    void cmd_selfplay(std::string_view args);
    void cmd_serve(std::string_view args);
    void push_state();
    void error(const std::string& what);

    Emit emit_;
    Options options_;
    Position position_;
    Searcher searcher_;
    std::atomic<bool> stop_{false};
    std::atomic<bool> searching_{false};
    std::thread worker_;
};

/// Reads commands from `in` until "quit" or end of input; "go" runs asynchronously.
/// Returns the process exit code.
int run_stdio(std::istream& in, std::ostream& out, Variant variant, const Session::ServeHook& serve = {});

}  // namespace zatrikion
