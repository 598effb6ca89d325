#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zatrikion/cfen.hpp"
#include "zatrikion/protocol.hpp"
#include "zatrikion/selfplay.hpp"

using namespace zatrikion;

namespace {

struct Transcript {
    std::vector<std::string> lines;
    Session session;

    explicit Transcript(Session::Options options = {})
        : session([this](const std::string& l) { lines.push_back(l); }, std::move(options)) {}

    /// Sends one command and returns the lines it produced.
    std::vector<std::string> send(std::string_view command) {
        const std::size_t before = lines.size();
        session.handle(command);
        session.wait();
        return {lines.begin() + static_cast<std::ptrdiff_t>(before), lines.end()};
    }
    std::string one(std::string_view command) {
        const auto out = send(command);
        REQUIRE(out.size() == 1);
        return out.front();
    }
};

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

constexpr const char* kMateInOne = "4s2k8/p11R3/6P9/K1B2R1P8 w - 2 78";
constexpr const char* kCircularMateInOne = "10R1Qn2/4B11/S9rk4/1R1K4P7 w - 7 93";
constexpr const char* kAnnihilation = "K7k7/3P1S10/16/8n7 w - 0 1";

}  // namespace

TEST_CASE("perft, status and eval through the protocol") {
    Transcript t;
    CHECK(t.send("variant byzantine-regular").empty());
    CHECK(t.send("position start").empty());
    CHECK(t.one("perft 2") == "196");
    CHECK(t.one("perft 1") == "14");
    t.send("position start moves c1b1");
    CHECK(t.one("status") == "ongoing");
    t.send("position start");
    CHECK(t.one("eval") == "0");
    t.send("variant circular");
    CHECK(t.one("perft 1") == "20");
    CHECK(t.one("isready") == "readyok");
}

TEST_CASE("go finds the mate in one") {
    Transcript t;
    t.send(std::string("position cfen ") + kMateInOne);
    for (int depth : {1, 3}) {
        const auto out = t.send("go depth " + std::to_string(depth) + " seed 7");
        REQUIRE(out.size() >= 2);
        CHECK(out.back() == "bestmove f4f1");
        for (std::size_t i = 0; i + 1 < out.size(); ++i) CHECK(starts_with(out[i], "info depth "));
        CHECK(out.front().find(" score cp 31999 ") != std::string::npos);
        CHECK(out.front().find(" pv f4f1") != std::string::npos);
    }
    t.send("variant circular");
    t.send(std::string("position cfen ") + kCircularMateInOne);
    CHECK(t.send("go depth 1").back() == "bestmove k1k3");
    t.send("move k1k3");
    CHECK(t.one("status") == "1-0 mate");
    CHECK(starts_with(t.one("go depth 1"), "error game-over"));
}

TEST_CASE("errors are single lines and leave the state alone") {
    Transcript t;
    t.send("position start moves c1b1");
    const std::string before = t.one("state");
    for (const char* bad : {"frobnicate", "move c1c9", "move a1a1", "move", "position start moves k1j1 zz",
                            "position cfen 16/16/16 w - 0 1", "position middle", "go", "go depth", "go depth x",
                            "go depth 0", "go sideways 3", "perft", "perft -1", "variant chess960",
                            "selfplay /nonexistent/match.cfg", "serve --port 1"}) {
        const auto out = t.send(bad);
        REQUIRE(out.size() == 1);
        CHECK(starts_with(out.front(), "error "));
        CHECK(t.one("state") == before);
    }
    CHECK(t.one("move c1c9") == "error illegal-move c1c9");
    CHECK(t.send("").empty());
    CHECK_FALSE(t.session.handle("quit"));
}

TEST_CASE("moves after the end of the game are refused") {
    Transcript t;
    t.send(std::string("position cfen ") + kMateInOne + " moves f4f1");
    CHECK(t.one("status") == "1-0 mate");
    CHECK(starts_with(t.one("move i1j1"), "error illegal-move"));
}

TEST_CASE("state lines list the cFEN, the status and every legal move") {
    Transcript t;
    std::istringstream state(t.one("state"));
    std::string word;
    std::vector<std::string> fields;
    while (state >> word) fields.push_back(word);
    REQUIRE(fields.size() == 7 + 14);
    CHECK(fields[0] == "state");
    CHECK(fields[1] + " " + fields[2] + " " + fields[3] + " " + fields[4] + " " + fields[5] ==
          format_cfen(initial_position(Variant::ByzantineRegular)));
    CHECK(fields[6] == "ongoing");

    t.send(std::string("position cfen ") + kMateInOne + " moves f4f1");
    CHECK(t.one("state") == "state " + format_cfen(t.session.position()) + " 1-0:mate");
}

TEST_CASE("push mode reports state and annihilation events") {
    Session::Options options;
    options.push_state = true;
    Transcript t(options);
    const auto after_variant = t.send("variant byzantine-symmetric");
    REQUIRE(after_variant.size() == 1);
    CHECK(starts_with(after_variant.front(), "state 2SKQP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - 0 1 ongoing "));

    t.send(std::string("position cfen ") + kAnnihilation);
    const auto out = t.send("move f2e2");
    REQUIRE(out.size() == 2);
    CHECK(out[0] == "event annihilation d2 e2");
    CHECK(starts_with(out[1], "state K7k7/16/16/8n7 b - "));
    CHECK(out[1].find(" 0-1:bare-king") != std::string::npos);

    const auto rejected = t.send("move a1a1");
    REQUIRE(rejected.size() == 1);
    CHECK(starts_with(rejected.front(), "error"));
}

TEST_CASE("asynchronous go can be stopped") {
    std::mutex mutex;
    std::vector<std::string> lines;
    Session::Options options;
    options.async_go = true;
    Session s(
        [&](const std::string& l) {
            const std::lock_guard lock(mutex);
            lines.push_back(l);
        },
        options);
    s.handle("go movetime 60000");
    CHECK(s.searching());
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    const auto t0 = std::chrono::steady_clock::now();
    s.handle("stop");
    s.wait();
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(2));
    CHECK_FALSE(s.searching());
    const std::lock_guard lock(mutex);
    REQUIRE_FALSE(lines.empty());
    CHECK(starts_with(lines.back(), "bestmove "));
}

TEST_CASE("selfplay writes stats next to the config") {
    const auto dir = std::filesystem::temp_directory_path() / "zatrikion-protocol-selfplay";
    std::filesystem::create_directories(dir);
    {
        std::ofstream cfg(dir / "quick.cfg");
        cfg << "variant=circular\ngames=2\ndepth=1\nseed=3\nply_cap=60\n";
    }
    Transcript t;
    const std::string path = t.one("selfplay " + (dir / "quick.cfg").string());
    CHECK(path == (dir / "quick.stats.json").string());
    const MatchStats stats = read_stats(path);
    CHECK(stats.games == 2);
    CHECK(stats.variant == Variant::CircularFIDE);

    const std::string csv = t.one("selfplay " + (dir / "quick.cfg").string() + " out " + (dir / "s.csv").string());
    CHECK(read_stats(csv) == stats);
    std::filesystem::remove_all(dir);
}

TEST_CASE("stdio loop answers and exits cleanly") {
    std::istringstream in("position start\nperft 2\nbogus\nquit\nperft 1\n");
    std::ostringstream out;
    CHECK(run_stdio(in, out, Variant::ByzantineRegular) == 0);
    CHECK(out.str() == "196\nerror unknown command 'bogus'\n");

    std::istringstream eof("variant circular\nperft 1\n");
    std::ostringstream out2;
    CHECK(run_stdio(eof, out2, Variant::ByzantineRegular) == 0);
    CHECK(out2.str() == "20\n");

    std::istringstream serve("serve --port 9\nquit\n");
    std::ostringstream out3;
    CHECK(run_stdio(serve, out3, Variant::ByzantineRegular, [](int port) { return "serving " + std::to_string(port); }) ==
          0);
    CHECK(out3.str() == "serving 9\n");
}
