#include "zatrikion/selfplay.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "zatrikion/movegen.hpp"

namespace zatrikion {

namespace {

std::uint64_t splitmix(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename T>
T to_number(std::string_view text, std::string_view what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw HarnessError("bad " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

bool to_bool(std::string_view text, std::string_view what) {
    if (text == "true" || text == "on" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "off" || text == "0" || text == "no") return false;
    throw HarnessError("bad " + std::string(what) + " '" + std::string(text) + "'");
}

const std::vector<std::string> kDecisiveCodes{"mate", "stalemate-win", "bare-king"};

std::string fixed4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

}  // namespace

// ── Configuration ───────────────────────────────────────────────────────────
std::string Diversify::to_string() const {
    switch (kind) {
        case Kind::None: return "none";
        case Kind::Jitter: return "jitter:" + std::to_string(jitter_cp);
        case Kind::RandomOpening:
            return "random_opening:" + std::to_string(opening_plies) + ":" + std::to_string(top_moves);
    }
    return "none";
}

Diversify Diversify::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    for (std::size_t start = 0;;) {
        const auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    if (parts[0] == "none" && parts.size() == 1) return none();
    if (parts[0] == "jitter" && parts.size() == 2) return jitter(to_number<int>(parts[1], "jitter"));
    if (parts[0] == "random_opening" && parts.size() == 3)
        return random_opening(to_number<int>(parts[1], "opening plies"), to_number<int>(parts[2], "top moves"));
    throw HarnessError("bad diversify '" + std::string(text) + "'");
}

void MatchConfig::validate() const {
    if (games < 1) throw HarnessError("games must be at least 1");
    if (ply_cap <= 0) throw HarnessError("ply_cap must be positive");
    if (workers < 1) throw HarnessError("workers must be at least 1");
    if (!limits.any()) throw HarnessError("no search limit set");
    if (adjudicate_no_capture && *adjudicate_no_capture < 1) throw HarnessError("adjudicate_no_capture must be positive");
    if (diversify.kind == Diversify::Kind::RandomOpening && (diversify.opening_plies < 0 || diversify.top_moves < 1))
        throw HarnessError("bad random_opening parameters");
    if (diversify.kind == Diversify::Kind::Jitter && diversify.jitter_cp < 0) throw HarnessError("negative jitter");
}

MatchConfig MatchConfig::parse(std::string_view text) {
    MatchConfig c;
    bool limits_given = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw HarnessError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!limits_given && (key == "depth" || key == "movetime" || key == "nodes")) {
            c.limits = {};
            limits_given = true;
        }
        if (key == "variant")
            c.variant = parse_variant(value);
        else if (key == "games")
            c.games = to_number<int>(value, key);
        else if (key == "depth")
            c.limits.max_depth = to_number<int>(value, key);
        else if (key == "movetime")
            c.limits.movetime = std::chrono::milliseconds(to_number<int>(value, key));
        else if (key == "nodes")
            c.limits.max_nodes = to_number<std::uint64_t>(value, key);
        else if (key == "seed")
            c.seed = to_number<std::uint64_t>(value, key);
        else if (key == "diversify")
            c.diversify = Diversify::parse(value);
        else if (key == "adjudicate_no_capture")
            c.adjudicate_no_capture = value == "off" ? std::nullopt : std::optional<int>(to_number<int>(value, key));
        else if (key == "ply_cap")
            c.ply_cap = to_number<int>(value, key);
        else if (key == "swap_colors")
            c.swap_colors = to_bool(value, key);
        else if (key == "workers")
            c.workers = to_number<int>(value, key);
        else
            throw HarnessError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

std::string MatchConfig::to_string() const {
    std::ostringstream out;
    out << "variant=" << variant_name(variant) << '\n' << "games=" << games << '\n';
    if (limits.max_depth) out << "depth=" << *limits.max_depth << '\n';
    if (limits.movetime) out << "movetime=" << limits.movetime->count() << '\n';
    if (limits.max_nodes) out << "nodes=" << *limits.max_nodes << '\n';
    out << "seed=" << seed << '\n'
        << "diversify=" << diversify.to_string() << '\n'
        << "adjudicate_no_capture="
        << (adjudicate_no_capture ? std::to_string(*adjudicate_no_capture) : std::string("off")) << '\n'
        << "ply_cap=" << ply_cap << '\n'
        << "swap_colors=" << (swap_colors ? "true" : "false") << '\n'
        << "workers=" << workers << '\n';
    return out.str();
}

std::uint64_t game_seed(std::uint64_t match_seed, int game_index) noexcept {
    return splitmix(splitmix(match_seed) ^ static_cast<std::uint64_t>(game_index));
}

// ── Playing ─────────────────────────────────────────────────────────────────
namespace {

// Harness adjudication on top of the rules: no-capture limit and ply cap.
GameStatus adjudicate(const Position& p, const MoveList& legal, int plies, std::optional<int> no_capture, int ply_cap) {
    const GameStatus st = game_status(p, legal);
    if (st.is_terminal()) return st;
    if (no_capture && p.no_capture_clock() >= 2 * *no_capture) return GameStatus::draw(DrawReason::NoCaptureLimit);
    if (plies >= ply_cap) return GameStatus::draw(DrawReason::PlyCap);
    return st;
}

}  // namespace

GameRecord play_game(const MatchConfig& config, int game_index) {
    config.validate();
    GameRecord rec;
    rec.variant = config.variant;
    rec.match_seed = config.seed;
    rec.game_index = game_index;
    rec.seed = game_seed(config.seed, game_index);
    rec.engine_a_white = !config.swap_colors || game_index % 2 == 0;
    rec.adjudicate_no_capture = config.adjudicate_no_capture;
    rec.ply_cap = config.ply_cap;

    EvalParams params = EvalParams::defaults(config.variant);
    if (config.diversify.kind == Diversify::Kind::Jitter) params.jitter_cp = config.diversify.jitter_cp;
    // Engine A and B differ only in their seed stream.
    const std::uint64_t engine_seed[2] = {splitmix(rec.seed ^ 0xA), splitmix(rec.seed ^ 0xB)};
    Searcher engines[2] = {Searcher(16), Searcher(16)};
    std::mt19937_64 rng(rec.seed);

    Position p = initial_position(config.variant);
    MoveList legal;
    for (;;) {
        generate_legal(p, legal);
        const GameStatus st = adjudicate(p, legal, rec.plies(), config.adjudicate_no_capture, config.ply_cap);
        if (st.is_terminal()) {
            rec.result = st;
            break;
        }
        const bool white = p.side_to_move() == Color::White;
        const int engine = (white == rec.engine_a_white) ? 0 : 1;
        const std::uint64_t move_seed = splitmix(engine_seed[engine] + static_cast<std::uint64_t>(rec.plies()));
        Move choice;
        try {
            if (config.diversify.kind == Diversify::Kind::RandomOpening && rec.plies() < config.diversify.opening_plies) {
                const int depth = config.limits.max_depth.value_or(2);
                const auto ranked = engines[engine].rank_root_moves(p, depth, params, move_seed);
                const auto pool = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(config.diversify.top_moves));
                choice = ranked[rng() % pool].move;
            } else {
                choice = engines[engine].search(p, config.limits, params, move_seed).best_move;
            }
        } catch (const std::exception& e) {
            rec.error = std::string("engine failed: ") + e.what();
            break;
        }
        if (std::find(legal.begin(), legal.end(), choice) == legal.end()) {
            rec.error = "engine returned illegal move " + move_to_text(choice);
            break;
        }
        rec.moves.push_back(move_to_text(choice));
        apply_move(p, choice);
    }
    return rec;
}

// ── Records ─────────────────────────────────────────────────────────────────
std::string export_record(const GameRecord& r) {
    std::ostringstream out;
    auto header = [&out](std::string_view key, const std::string& value) {
        out << '[' << key << " \"" << value << "\"]\n";
    };
    header("Variant", std::string(variant_name(r.variant)));
    header("MatchSeed", std::to_string(r.match_seed));
    header("Game", std::to_string(r.game_index));
    header("Seed", std::to_string(r.seed));
    header("White", r.engine_a_white ? "engine-a" : "engine-b");
    header("Black", r.engine_a_white ? "engine-b" : "engine-a");
    header("NoCaptureLimit", r.adjudicate_no_capture ? std::to_string(*r.adjudicate_no_capture) : "off");
    header("PlyCap", std::to_string(r.ply_cap));
    header("Plies", std::to_string(r.plies()));
    header("Result", r.result.to_string());
    if (r.error) header("Error", *r.error);
    out << '\n';
    for (std::size_t i = 0; i < r.moves.size(); ++i) {
        if (i % 2 == 0) out << (i / 2 + 1) << ". ";
        out << r.moves[i] << (i + 1 == r.moves.size() ? "" : " ");
    }
    out << '\n';
    return out.str();
}

GameRecord parse_record(std::string_view text) {
    GameRecord r;
    std::istringstream in{std::string(text)};
    std::string line;
    std::map<std::string, std::string> headers;
    while (std::getline(in, line) && !line.empty()) {
        const auto space = line.find(' ');
        if (line.front() != '[' || line.back() != ']' || space == std::string::npos || line.size() < space + 4)
            throw HarnessError("bad record header '" + line + "'");
        std::string value = line.substr(space + 1, line.size() - space - 2);
        if (value.size() < 2 || value.front() != '"' || value.back() != '"')
            throw HarnessError("bad record header '" + line + "'");
        headers[line.substr(1, space - 1)] = value.substr(1, value.size() - 2);
    }
    auto need = [&headers](const std::string& key) -> const std::string& {
        const auto it = headers.find(key);
        if (it == headers.end()) throw HarnessError("record lacks header " + key);
        return it->second;
    };
    r.variant = parse_variant(need("Variant"));
    r.match_seed = to_number<std::uint64_t>(need("MatchSeed"), "MatchSeed");
    r.game_index = to_number<int>(need("Game"), "Game");
    r.seed = to_number<std::uint64_t>(need("Seed"), "Seed");
    r.engine_a_white = need("White") == "engine-a";
    const std::string& nc = need("NoCaptureLimit");
    if (nc != "off") r.adjudicate_no_capture = to_number<int>(nc, "NoCaptureLimit");
    r.ply_cap = to_number<int>(need("PlyCap"), "PlyCap");
    r.result = GameStatus::parse(need("Result"));
    if (const auto it = headers.find("Error"); it != headers.end()) r.error = it->second;

    std::string token;
    while (in >> token)
        if (token.back() != '.') r.moves.push_back(token);
    if (static_cast<int>(r.moves.size()) != to_number<int>(need("Plies"), "Plies"))
        throw HarnessError("record move count does not match Plies header");
    return r;
}

GameStatus replay(const GameRecord& r) {
    Position p = initial_position(r.variant);
    for (const std::string& text : r.moves) {
        const Move m = parse_move(p, text);
        apply_move(p, m);
    }
    MoveList legal;
    generate_legal(p, legal);
    return adjudicate(p, legal, r.plies(), r.adjudicate_no_capture, r.ply_cap);
}

// ── Statistics ──────────────────────────────────────────────────────────────
const std::vector<std::string>& reason_codes() {
    static const std::vector<std::string> codes{"mate",      "stalemate-win", "bare-king",
                                                "stalemate", "two-bare-kings", "repetition",
                                                "no-capture", "ply-cap",       "insufficient-force"};
    return codes;
}

MatchStats empty_stats(Variant v) {
    MatchStats s;
    s.variant = v;
    for (const auto& code : reason_codes()) s.reasons[code] = 0;
    for (const auto& code : kDecisiveCodes) {
        s.white_wins_by[code] = 0;
        s.black_wins_by[code] = 0;
    }
    return s;
}

double MatchStats::decisive_rate() const noexcept {
    return games ? static_cast<double>(white_wins + black_wins) / games : 0.0;
}

double MatchStats::draw_rate() const noexcept { return games ? static_cast<double>(draws) / games : 0.0; }

double MatchStats::mean_length() const noexcept {
    return games ? static_cast<double>(total_plies) / games : 0.0;
}

void MatchStats::add(const GameRecord& r) {
    if (r.error) {
        ++errors;
        return;
    }
    ++games;
    total_plies += static_cast<std::uint64_t>(r.plies());
    const std::string code = r.result.reason_code();
    ++reasons[code];
    if (r.result.is_draw()) {
        ++draws;
    } else if (*r.result.winner() == Color::White) {
        ++white_wins;
        ++white_wins_by[code];
    } else {
        ++black_wins;
        ++black_wins_by[code];
    }
}

ScoreTable score(const MatchStats& s, bool mate_bonus) {
    auto side = [&](int wins, const std::map<std::string, int>& by) {
        double total = wins + 0.5 * s.draws;
        if (mate_bonus) {
            const auto it = by.find("mate");
            if (it != by.end()) total += 0.5 * it->second;
        }
        return total;
    };
    return {side(s.white_wins, s.white_wins_by), side(s.black_wins, s.black_wins_by)};
}

MatchStats run_match(const MatchConfig& config, std::vector<GameRecord>* records, const ProgressCallback& progress) {
    config.validate();
    std::vector<GameRecord> games(static_cast<std::size_t>(config.games));
    std::atomic<int> next{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (int i = next++; i < config.games; i = next++) {
            games[static_cast<std::size_t>(i)] = play_game(config, i);
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(games[static_cast<std::size_t>(i)]);
            }
        }
    };
    const int threads = std::min(config.workers, config.games);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    MatchStats stats = empty_stats(config.variant);
    for (const GameRecord& g : games) stats.add(g);
    if (records) *records = std::move(games);
    return stats;
}

// ── Export ──────────────────────────────────────────────────────────────────
namespace {

constexpr std::string_view kStatsFormat = "zatrikion-match-stats";
constexpr int kStatsVersion = 1;

std::vector<std::string> csv_columns() {
    std::vector<std::string> cols{"variant", "games", "white_wins", "draws", "black_wins", "errors", "total_plies"};
    for (const auto& c : reason_codes()) cols.push_back("reason:" + c);
    for (const auto& c : kDecisiveCodes) cols.push_back("white:" + c);
    for (const auto& c : kDecisiveCodes) cols.push_back("black:" + c);
    cols.insert(cols.end(), {"decisive_rate", "mean_length", "score_white", "score_black", "score_white_mate_bonus",
                             "score_black_mate_bonus"});
    return cols;
}

}  // namespace

std::string export_stats(const MatchStats& s, StatsFormat format) {
    const ScoreTable standard = score(s, false);
    const ScoreTable bonus = score(s, true);
    if (format == StatsFormat::Json) {
        nlohmann::ordered_json j;
        j["format"] = kStatsFormat;
        j["version"] = kStatsVersion;
        j["variant"] = variant_name(s.variant);
        j["games"] = s.games;
        j["white_wins"] = s.white_wins;
        j["draws"] = s.draws;
        j["black_wins"] = s.black_wins;
        j["errors"] = s.errors;
        j["total_plies"] = s.total_plies;
        j["reasons"] = s.reasons;
        j["white_wins_by"] = s.white_wins_by;
        j["black_wins_by"] = s.black_wins_by;
        j["decisive_rate"] = fixed4(s.decisive_rate());
        j["mean_length"] = fixed4(s.mean_length());
        j["score"] = {{"standard", {{"white", standard.white}, {"black", standard.black}}},
                      {"mate_bonus", {{"white", bonus.white}, {"black", bonus.black}}}};
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    const auto cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n' << variant_name(s.variant) << ',' << s.games << ',' << s.white_wins << ',' << s.draws << ','
        << s.black_wins << ',' << s.errors << ',' << s.total_plies;
    for (const auto& c : reason_codes()) out << ',' << s.reasons.at(c);
    for (const auto& c : kDecisiveCodes) out << ',' << s.white_wins_by.at(c);
    for (const auto& c : kDecisiveCodes) out << ',' << s.black_wins_by.at(c);
    out << ',' << fixed4(s.decisive_rate()) << ',' << fixed4(s.mean_length()) << ',' << fixed4(standard.white) << ','
        << fixed4(standard.black) << ',' << fixed4(bonus.white) << ',' << fixed4(bonus.black) << '\n';
    return out.str();
}

MatchStats import_stats(std::string_view text, StatsFormat format) {
    if (format == StatsFormat::Json) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw HarnessError(std::string("stats json: ") + e.what());
        }
        if (j.value("format", "") != kStatsFormat || j.value("version", 0) != kStatsVersion)
            throw HarnessError("stats json: unknown format or version");
        try {
            MatchStats s = empty_stats(parse_variant(j.at("variant").get<std::string>()));
            s.games = j.at("games");
            s.white_wins = j.at("white_wins");
            s.draws = j.at("draws");
            s.black_wins = j.at("black_wins");
            s.errors = j.at("errors");
            s.total_plies = j.at("total_plies");
            for (auto& [k, v] : j.at("reasons").items()) s.reasons[k] = v;
            for (auto& [k, v] : j.at("white_wins_by").items()) s.white_wins_by[k] = v;
            for (auto& [k, v] : j.at("black_wins_by").items()) s.black_wins_by[k] = v;
            return s;
        } catch (const nlohmann::json::exception& e) {
            throw HarnessError(std::string("stats json: ") + e.what());
        }
    }
    std::istringstream in{std::string(text)};
    std::string head, row;
    if (!std::getline(in, head) || !std::getline(in, row)) throw HarnessError("stats csv: need a header and a row");
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
        return out;
    };
    const auto names = split(head);
    const auto cells = split(row);
    if (names != csv_columns() || cells.size() != names.size()) throw HarnessError("stats csv: unexpected columns");
    std::map<std::string, std::string> field;
    for (std::size_t i = 0; i < names.size(); ++i) field[names[i]] = cells[i];
    MatchStats s = empty_stats(parse_variant(field["variant"]));
    s.games = to_number<int>(field["games"], "games");
    s.white_wins = to_number<int>(field["white_wins"], "white_wins");
    s.draws = to_number<int>(field["draws"], "draws");
    s.black_wins = to_number<int>(field["black_wins"], "black_wins");
    s.errors = to_number<int>(field["errors"], "errors");
    s.total_plies = to_number<std::uint64_t>(field["total_plies"], "total_plies");
    for (const auto& c : reason_codes()) s.reasons[c] = to_number<int>(field["reason:" + c], c);
    for (const auto& c : kDecisiveCodes) s.white_wins_by[c] = to_number<int>(field["white:" + c], c);
    for (const auto& c : kDecisiveCodes) s.black_wins_by[c] = to_number<int>(field["black:" + c], c);
    return s;
}

void write_stats(const MatchStats& stats, StatsFormat format, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw HarnessError("cannot write " + path.string());
    out << export_stats(stats, format);
    if (!out) throw HarnessError("write failed for " + path.string());
}

MatchStats read_stats(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw HarnessError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return import_stats(buf.str(), path.extension() == ".csv" ? StatsFormat::Csv : StatsFormat::Json);
}

}  // namespace zatrikion
