#pragma once

/// @file selfplay.hpp
/// Engine-vs-engine matches, game records and match statistics.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zatrikion/adjudicator.hpp"
#include "zatrikion/board.hpp"
#include "zatrikion/search.hpp"

namespace zatrikion {

class HarnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Diversify {
    enum class Kind { None, Jitter, RandomOpening };

    Kind kind = Kind::RandomOpening;
    int jitter_cp = 0;
    int opening_plies = 4;
    int top_moves = 3;

    [[nodiscard]] static Diversify none() { return {Kind::None, 0, 0, 0}; }
    [[nodiscard]] static Diversify jitter(int cp) { return {Kind::Jitter, cp, 0, 0}; }
    [[nodiscard]] static Diversify random_opening(int plies, int top) { return {Kind::RandomOpening, 0, plies, top}; }

    /// "none", "jitter:<cp>", "random_opening:<plies>:<top>".
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] static Diversify parse(std::string_view text);

    friend bool operator==(const Diversify&, const Diversify&) = default;
};

struct MatchConfig {
    Variant variant = Variant::ByzantineRegular;
    int games = 100;
    SearchLimits limits = SearchLimits::depth(4);
    std::uint64_t seed = 1;
    Diversify diversify = Diversify::random_opening(4, 3);
    std::optional<int> adjudicate_no_capture;  // full moves without capture
    int ply_cap = 400;
    bool swap_colors = true;
    int workers = 1;

    /// Throws HarnessError on games < 1, ply_cap <= 0, workers < 1 or no search limit.
    void validate() const;

    /// Flat key=value lines; '#' starts a comment. Unknown keys are errors.
    /// Keys: variant games depth movetime nodes seed diversify adjudicate_no_capture ply_cap swap_colors workers.
    [[nodiscard]] static MatchConfig parse(std::string_view text);
    [[nodiscard]] std::string to_string() const;
};

/// Per-game seed: a fixed mix of the match seed and the game index.
[[nodiscard]] std::uint64_t game_seed(std::uint64_t match_seed, int game_index) noexcept;

struct GameRecord {
    Variant variant = Variant::ByzantineRegular;
    std::uint64_t match_seed = 0;
    int game_index = 0;
    std::uint64_t seed = 0;
    bool engine_a_white = true;
    std::optional<int> adjudicate_no_capture;
    int ply_cap = 400;
    std::vector<std::string> moves;
    GameStatus result = GameStatus::ongoing();
    std::optional<std::string> error;  // set when the engine misbehaved; such games are never scored

    [[nodiscard]] int plies() const noexcept { return static_cast<int>(moves.size()); }
    [[nodiscard]] std::string termination() const { return result.reason_code(); }

    friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

[[nodiscard]] GameRecord play_game(const MatchConfig& config, int game_index);

/// Header lines ([Key "value"]), a blank line, then a numbered move list.
[[nodiscard]] std::string export_record(const GameRecord& record);
[[nodiscard]] GameRecord parse_record(std::string_view text);
/// Replays the move list through apply_move and re-adjudicates the final position.
[[nodiscard]] GameStatus replay(const GameRecord& record);

/// Reason codes tallied in MatchStats, in export order.
[[nodiscard]] const std::vector<std::string>& reason_codes();

struct MatchStats {
    Variant variant = Variant::ByzantineRegular;
    int games = 0;
    int white_wins = 0;
    int black_wins = 0;
    int draws = 0;
    int errors = 0;
    std::uint64_t total_plies = 0;
    std::map<std::string, int> reasons;      // every code of reason_codes(), zero-filled
    std::map<std::string, int> white_wins_by;  // decisive reasons only
    std::map<std::string, int> black_wins_by;

    [[nodiscard]] bool valid() const noexcept { return errors == 0; }
    [[nodiscard]] double decisive_rate() const noexcept;
    [[nodiscard]] double draw_rate() const noexcept;
    [[nodiscard]] double mean_length() const noexcept;

    void add(const GameRecord& record);

    friend bool operator==(const MatchStats&, const MatchStats&) = default;
};

[[nodiscard]] MatchStats empty_stats(Variant v);

struct ScoreTable {
    double white = 0.0;
    double black = 0.0;

    friend bool operator==(const ScoreTable&, const ScoreTable&) = default;
};

/// Win 1, draw 0.5; with mate_bonus a mate scores 1.5.
[[nodiscard]] ScoreTable score(const MatchStats& stats, bool mate_bonus);

using ProgressCallback = std::function<void(const GameRecord&)>;

/// Plays config.games games on config.workers threads and aggregates them in game order.
/// Records are returned through `records` when given.
[[nodiscard]] MatchStats run_match(const MatchConfig& config, std::vector<GameRecord>* records = nullptr,
                                   const ProgressCallback& progress = {});

enum class StatsFormat { Json, Csv };

[[nodiscard]] std::string export_stats(const MatchStats& stats, StatsFormat format);
[[nodiscard]] MatchStats import_stats(std::string_view text, StatsFormat format);
void write_stats(const MatchStats& stats, StatsFormat format, const std::filesystem::path& path);
[[nodiscard]] MatchStats read_stats(const std::filesystem::path& path);

}  // namespace zatrikion
