#include "zatrikion/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "zatrikion/adjudicator.hpp"
#include "zatrikion/cfen.hpp"
#include "zatrikion/movegen.hpp"
#include "zatrikion/selfplay.hpp"

namespace zatrikion {

namespace {

class CommandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string_view> split(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') ++j;
        if (j > i) out.push_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string join(const std::vector<std::string_view>& words, std::size_t from, std::size_t to) {
    std::string out;
    for (std::size_t i = from; i < to; ++i) {
        if (i > from) out += ' ';
        out += words[i];
    }
    return out;
}

template <typename T>
T number(std::string_view text, std::string_view what) {
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size())
        throw CommandError("bad " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

std::string status_token(const GameStatus& s) {
    if (!s.is_terminal()) return "ongoing";
    return s.result_token() + ":" + s.reason_code();
}

std::string info_line(const SearchInfo& info) {
    std::string line = "info depth " + std::to_string(info.depth) + " score cp " + std::to_string(info.score) +
                       " nodes " + std::to_string(info.nodes) + " time " + std::to_string(info.elapsed.count());
    if (!info.pv.empty()) {
        line += " pv";
        for (const Move& m : info.pv) line += " " + move_to_text(m);
    }
    return line;
}

}  // namespace

Session::Session(Emit emit, Options options)
    : emit_(std::move(emit)), options_(std::move(options)), position_(initial_position(options_.variant)) {}

Session::~Session() {
    stop_ = true;
    wait();
}

void Session::wait() {
    if (worker_.joinable()) worker_.join();
}

std::string Session::state_line() const {
    const MoveList legal = legal_moves(position_);
    std::string line = "state " + format_cfen(position_) + " " + status_token(game_status(position_, legal));
    for (const Move& m : legal) line += " " + move_to_text(m);
    return line;
}

bool Session::handle(std::string_view line) {
    const auto words = split(line);
    if (words.empty()) return true;
    const std::string_view cmd = words.front();
    const std::string_view args = words.size() > 1 ? line.substr(line.find(words[1], cmd.size())) : std::string_view{};

    if (cmd == "stop") {
        stop_ = true;
        return true;
    }
    if (cmd == "quit") {
        stop_ = true;
        wait();
        return false;
    }
    if (cmd == "isready") {
        emit_("readyok");
        return true;
    }
    wait();

    try {
        if (cmd == "variant") {
            cmd_variant(args);
        } else if (cmd == "position") {
            cmd_position(args);
        } else if (cmd == "move") {
            cmd_move(args);
        } else if (cmd == "go") {
            cmd_go(args);
        } else if (cmd == "perft") {
            cmd_perft(args);
        } else if (cmd == "eval") {
            if (words.size() != 1) throw CommandError("eval takes no arguments");
            emit_(std::to_string(evaluate(position_, EvalParams::defaults(position_.variant()))));
        } else if (cmd == "status") {
            if (words.size() != 1) throw CommandError("status takes no arguments");
            emit_(game_status(position_).to_string());
        } else if (cmd == "state") {
            if (words.size() != 1) throw CommandError("state takes no arguments");
            emit_(state_line());
        } else if (cmd == "selfplay") {
            cmd_selfplay(args);
        } else if (cmd == "serve") {
            cmd_serve(args);
        } else {
            throw CommandError("unknown command '" + std::string(cmd) + "'");
        }
    } catch (const std::exception& e) {
        error(e.what());
    }
    return true;
}

void Session::error(const std::string& what) { emit_("error " + what); }

void Session::push_state() {
    if (options_.push_state) emit_(state_line());
}

void Session::cmd_variant(std::string_view args) {
    const auto words = split(args);
    if (words.size() != 1) throw CommandError("usage: variant <name>");
    position_ = initial_position(parse_variant(words[0]));
    push_state();
}

void Session::cmd_position(std::string_view args) {
    const auto words = split(args);
    if (words.empty()) throw CommandError("usage: position start|cfen <cfen> [moves <m>...]");
    std::size_t i = 0;
    Position next;
    if (words[0] == "start") {
        next = initial_position(position_.variant());
        i = 1;
    } else if (words[0] == "cfen") {
        if (words.size() < 6) throw CommandError("cfen needs 5 fields");
        next = parse_cfen(join(words, 1, 6), position_.variant());
        i = 6;
    } else {
        throw CommandError("usage: position start|cfen <cfen> [moves <m>...]");
    }
    if (i < words.size()) {
        if (words[i] != "moves") throw CommandError("expected 'moves', got '" + std::string(words[i]) + "'");
        for (++i; i < words.size(); ++i) apply_move(next, parse_move(next, words[i]));
    }
    position_ = std::move(next);
    push_state();
}

void Session::cmd_move(std::string_view args) {
    const auto words = split(args);
    if (words.size() != 1) throw CommandError("usage: move <m>");
    Move m;
    try {
        m = parse_move(position_, words[0]);
    } catch (const std::exception&) {
        throw IllegalMoveError("illegal-move " + std::string(words[0]));
    }
    const GameStatus before = game_status(position_);
    if (before.is_terminal()) throw CommandError("game-over " + status_token(before));
    apply_move(position_, m);
    if (options_.push_state && m.annihilated_count > 0) {
        std::vector<Square> removed;
        for (const Removal& r : m.annihilations()) removed.push_back(r.square);
        std::sort(removed.begin(), removed.end());
        std::string event = "event annihilation";
        for (const Square sq : removed) event += " " + square_name(sq);
        emit_(event);
    }
    push_state();
}

void Session::cmd_go(std::string_view args) {
    const auto words = split(args);
    SearchLimits limits;
    std::uint64_t seed = 0;
    for (std::size_t i = 0; i < words.size(); i += 2) {
        if (i + 1 >= words.size()) throw CommandError("missing value after '" + std::string(words[i]) + "'");
        const std::string_view key = words[i];
        const std::string_view value = words[i + 1];
        if (key == "depth") {
            const int d = number<int>(value, "depth");
            if (d < 1 || d >= kMaxPly) throw CommandError("depth out of range");
            limits.max_depth = d;
        } else if (key == "movetime") {
            const int ms = number<int>(value, "movetime");
            if (ms < 1) throw CommandError("movetime must be positive");
            limits.movetime = std::chrono::milliseconds(ms);
        } else if (key == "nodes") {
            limits.max_nodes = number<std::uint64_t>(value, "nodes");
        } else if (key == "seed") {
            seed = number<std::uint64_t>(value, "seed");
        } else {
            throw CommandError("unknown go parameter '" + std::string(key) + "'");
        }
    }
    if (!limits.any()) throw CommandError("go needs depth, movetime or nodes");
    const MoveList legal = legal_moves(position_);
    if (legal.empty()) throw CommandError("game-over " + status_token(game_status(position_, legal)));

    stop_ = false;
    searching_ = true;
    auto run = [this, limits, seed, root = position_] {
        try {
            const SearchResult r = searcher_.search(root, limits, EvalParams::defaults(root.variant()), seed, &stop_,
                                                    [this](const SearchInfo& info) { emit_(info_line(info)); });
            emit_("bestmove " + move_to_text(r.best_move));
        } catch (const std::exception& e) {
            emit_(std::string("error ") + e.what());
        }
        searching_ = false;
    };
    if (options_.async_go)
        worker_ = std::thread(std::move(run));
    else
        run();
}

void Session::cmd_perft(std::string_view args) {
    const auto words = split(args);
    if (words.size() != 1) throw CommandError("usage: perft N");
    const int depth = number<int>(words[0], "depth");
    if (depth < 0 || depth > 8) throw CommandError("perft depth must be 0..8");
    Position p = position_;
    emit_(std::to_string(perft(p, depth)));
}

void Session::cmd_selfplay(std::string_view args) {
    const auto words = split(args);
    if (words.size() != 1 && !(words.size() == 3 && words[1] == "out"))
        throw CommandError("usage: selfplay <config-file> [out <path>]");
    const std::filesystem::path config_path{std::string(words[0])};
    std::ifstream in(config_path);
    if (!in) throw CommandError("cannot read '" + config_path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    const MatchConfig config = MatchConfig::parse(text.str());

    std::filesystem::path out = config_path;
    out.replace_extension(".stats.json");
    if (words.size() == 3) out = std::string(words[2]);
    const StatsFormat format = out.extension() == ".csv" ? StatsFormat::Csv : StatsFormat::Json;
    write_stats(run_match(config), format, out);
    emit_(out.string());
}

void Session::cmd_serve(std::string_view args) {
    const auto words = split(args);
    if (words.size() != 2 || words[0] != "--port") throw CommandError("usage: serve --port P");
    const int port = number<int>(words[1], "port");
    if (port < 0 || port > 65535) throw CommandError("port out of range");
    if (!options_.serve) throw CommandError("serve is not available here");
    emit_(options_.serve(port));
}

int run_stdio(std::istream& in, std::ostream& out, Variant variant, const Session::ServeHook& serve) {
    std::mutex mutex;
    Session::Options options;
    options.variant = variant;
    options.async_go = true;
    options.serve = serve;
    Session session(
        [&](const std::string& line) {
            const std::lock_guard lock(mutex);
            out << line << '\n' << std::flush;
        },
        options);
    std::string line;
    while (std::getline(in, line))
        if (!session.handle(line)) return 0;
    session.handle("quit");
    return 0;
}

}  // namespace zatrikion
