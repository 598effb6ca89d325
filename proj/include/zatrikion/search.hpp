#pragma once

/// @file search.hpp
/// Evaluation and iterative-deepening alpha-beta search.

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zatrikion/adjudicator.hpp"
#include "zatrikion/board.hpp"
#include "zatrikion/movegen.hpp"

namespace zatrikion {

struct EvalParams {
    std::array<int, kPieceKinds> piece_values{};  // indexed by PieceKind, King unused
    int mobility_weight = 2;
    int jitter_cp = 0;

    /// Byzantine: P 100, Q 150, B 150, N 300, R 500. Circular: P 100, Q 1000, B 350, N 300, R 500.
    [[nodiscard]] static EvalParams defaults(Variant v);
    [[nodiscard]] int value(PieceKind k) const noexcept { return piece_values[index_of(k)]; }
};

struct SearchLimits {
    std::optional<int> max_depth;
    std::optional<std::chrono::milliseconds> movetime;
    std::optional<std::uint64_t> max_nodes;

    [[nodiscard]] static SearchLimits depth(int d) { return {.max_depth = d}; }
    [[nodiscard]] bool any() const noexcept { return max_depth || movetime || max_nodes; }
};

struct SearchResult {
    Move best_move;
    int score = 0;  // centipawns, side to move; mate as +-(kMateScore - ply)
    std::vector<Move> principal_variation;
    std::uint64_t nodes = 0;
    int depth_reached = 0;

    friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

struct SearchInfo {
    int depth = 0;
    int score = 0;
    std::uint64_t nodes = 0;
    std::chrono::milliseconds elapsed{0};
    std::vector<Move> pv;
};

struct ScoredMove {
    Move move;
    int score = 0;
};

class SearchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMateScore = 32000;
/// Stalemate-wins and bare-king wins score below any mate so that mate is preferred.
inline constexpr int kRuleWinScore = kMateScore - 1000;
inline constexpr int kMaxPly = 128;

[[nodiscard]] constexpr bool is_mate_score(int s) noexcept { return s > kMateScore - kMaxPly || s < -(kMateScore - kMaxPly); }
[[nodiscard]] constexpr bool is_win_class_score(int s) noexcept {
    return s > kRuleWinScore - kMaxPly || s < -(kRuleWinScore - kMaxPly);
}

/// Material difference (side to move minus opponent), no mobility, no jitter.
[[nodiscard]] int material_balance(const Position& p, const EvalParams& params) noexcept;
/// Material + mobility_weight * (own - opponent pseudo-legal moves) + seeded jitter.
[[nodiscard]] int evaluate(const Position& p, const EvalParams& params, std::uint64_t seed = 0) noexcept;

/// Score of a terminal status from the side-to-move's point of view, ply plies from the root.
[[nodiscard]] int terminal_score(const GameStatus& status, Color side_to_move, int ply) noexcept;

class Searcher {
public:
    using InfoCallback = std::function<void(const SearchInfo&)>;

    explicit Searcher(int tt_bits = 18);

    /// Throws SearchError when p has no legal moves, std::invalid_argument when no limit is set.
    SearchResult search(const Position& p, const SearchLimits& limits, const EvalParams& params, std::uint64_t seed,
                        const std::atomic<bool>* stop = nullptr, const InfoCallback& info = {});

    /// Every legal root move with its score from a full-window search of the given depth, best first.
    std::vector<ScoredMove> rank_root_moves(const Position& p, int depth, const EvalParams& params,
                                            std::uint64_t seed);

    void clear();
    void set_use_tt(bool on) noexcept { use_tt_ = on; }

private:
    struct TTEntry {
        std::uint64_t key = 0;
        std::int16_t score = 0;
        std::int8_t depth = -1;
        std::uint8_t bound = 0;
        std::uint16_t move = 0;
    };

    int negamax(Position& p, int depth, int alpha, int beta, int ply);
    int quiesce(Position& p, int alpha, int beta, int ply);
    bool out_of_budget();
    void order(const Position& p, MoveList& moves, std::uint16_t tt_move, int ply) const;

    std::vector<TTEntry> tt_;
    bool use_tt_ = true;

    // per-search state
    EvalParams params_{};
    std::uint64_t seed_ = 0;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    const std::atomic<bool>* stop_ = nullptr;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::optional<std::uint64_t> node_budget_;
    std::array<std::array<std::uint16_t, 2>, kMaxPly + 1> killers_{};
    std::array<std::array<int, kSquares>, kSquares> history_{};
    std::vector<std::array<Move, kMaxPly + 1>> pv_;
    std::array<int, kMaxPly + 1> pv_len_{};
};

/// One-shot search with a fresh Searcher; identical inputs give identical results.
[[nodiscard]] SearchResult search(const Position& p, const SearchLimits& limits, const EvalParams& params,
                                  std::uint64_t seed);

}  // namespace zatrikion
