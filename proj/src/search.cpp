#include "zatrikion/search.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace zatrikion {

// ── Evaluation ──────────────────────────────────────────────────────────────
EvalParams EvalParams::defaults(Variant v) {
    EvalParams e;
    auto set = [&e](PieceKind k, int cp) { e.piece_values[index_of(k)] = cp; };
    set(PieceKind::King, 0);
    set(PieceKind::Pawn, 100);
    set(PieceKind::Knight, 300);
    set(PieceKind::Rook, 500);
    if (is_byzantine(v)) {
        set(PieceKind::Queen, 150);
        set(PieceKind::Bishop, 150);
    } else {
        set(PieceKind::Queen, 1000);
        set(PieceKind::Bishop, 350);
    }
    return e;
}

namespace {

std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int side_material(const Position& p, Color c, const EvalParams& params) noexcept {
    int sum = 0;
    for (int k = 0; k < kPieceKinds; ++k) sum += p.piece_count(c, static_cast<PieceKind>(k)) * params.piece_values[k];
    return sum;
}

}  // namespace

int material_balance(const Position& p, const EvalParams& params) noexcept {
    const Color us = p.side_to_move();
    return side_material(p, us, params) - side_material(p, ~us, params);
}

int evaluate(const Position& p, const EvalParams& params, std::uint64_t seed) noexcept {
    const Color us = p.side_to_move();
    int score = material_balance(p, params);
    if (params.mobility_weight != 0)
        score += params.mobility_weight * (mobility(p, us) - mobility(p, ~us));
    if (params.jitter_cp > 0) {
        const auto span = static_cast<std::uint64_t>(2 * params.jitter_cp + 1);
        score += static_cast<int>(mix(seed ^ p.hash()) % span) - params.jitter_cp;
    }
    return score;
}

int terminal_score(const GameStatus& status, Color side_to_move, int ply) noexcept {
    int magnitude = 0;
    switch (status.kind()) {
        case GameStatus::Kind::Mate: magnitude = kMateScore - ply; break;
        case GameStatus::Kind::StalemateWin:
        case GameStatus::Kind::BareKingWin: magnitude = kRuleWinScore - ply; break;
        default: return 0;
    }
    return status.winner() == side_to_move ? magnitude : -magnitude;
}

// ── Search ──────────────────────────────────────────────────────────────────
namespace {

constexpr int kInfinity = kMateScore + 1;
enum Bound : std::uint8_t { kNone, kExact, kLower, kUpper };

std::uint16_t encode(const Move& m) noexcept {
    const int promo = m.promotion ? index_of(*m.promotion) + 1 : 0;
    return static_cast<std::uint16_t>(m.from | (m.to << 6) | (promo << 12));
}

int to_tt(int score, int ply) {
    if (score > kRuleWinScore - kMaxPly) return score + ply;
    if (score < -(kRuleWinScore - kMaxPly)) return score - ply;
    return score;
}

int from_tt(int score, int ply) {
    if (score > kRuleWinScore - kMaxPly) return score - ply;
    if (score < -(kRuleWinScore - kMaxPly)) return score + ply;
    return score;
}

// An earlier occurrence inside the reversible tail of the game counts as a draw in the tree.
bool repeats(const Position& p) noexcept {
    const auto& h = p.history();
    const auto n = static_cast<std::ptrdiff_t>(h.size());
    const auto window = std::min<std::ptrdiff_t>(n - 1, p.no_capture_clock());
    for (std::ptrdiff_t i = n - 2; i >= n - 1 - window; --i)
        if (h[static_cast<std::size_t>(i)] == p.hash()) return true;
    return false;
}

}  // namespace

Searcher::Searcher(int tt_bits) : tt_(std::size_t{1} << tt_bits), pv_(kMaxPly + 1) {}

void Searcher::clear() {
    std::fill(tt_.begin(), tt_.end(), TTEntry{});
}

bool Searcher::out_of_budget() {
    if (aborted_) return true;
    if ((nodes_ & 1023) != 0) return false;
    if (stop_ && stop_->load(std::memory_order_relaxed)) aborted_ = true;
    if (node_budget_ && nodes_ >= *node_budget_) aborted_ = true;
    if (deadline_ && std::chrono::steady_clock::now() >= *deadline_) aborted_ = true;
    return aborted_;
}

void Searcher::order(const Position& p, MoveList& moves, std::uint16_t tt_move, int ply) const {
    std::array<int, MoveList::kCapacity> keys{};
    for (std::size_t i = 0; i < moves.size(); ++i) {
        const Move& m = moves[i];
        const std::uint16_t code = encode(m);
        int key;
        if (code == tt_move) {
            key = 1 << 30;
        } else if (m.is_tactical()) {
            const int victim = m.captured ? params_.value(m.captured->kind) : 0;
            const int attacker = params_.value(p.at(m.from)->kind);
            const int promo = m.promotion ? params_.value(*m.promotion) : 0;
            key = (1 << 24) + victim * 16 - attacker / 16 + promo;
        } else if (code == killers_[ply][0]) {
            key = (1 << 23) + 1;
        } else if (code == killers_[ply][1]) {
            key = 1 << 23;
        } else {
            key = history_[m.from][m.to];
        }
        keys[i] = key;
    }
    // insertion sort keeps generation order among equal keys
    for (std::size_t i = 1; i < moves.size(); ++i) {
        const Move m = moves[i];
        const int k = keys[i];
        std::size_t j = i;
        while (j > 0 && keys[j - 1] < k) {
            moves[j] = moves[j - 1];
            keys[j] = keys[j - 1];
            --j;
        }
        moves[j] = m;
        keys[j] = k;
    }
}

int Searcher::quiesce(Position& p, int alpha, int beta, int ply) {
    ++nodes_;
    if (out_of_budget()) return 0;

    const Color us = p.side_to_move();
    if (is_bare(p, us) || is_bare(p, ~us) || ply >= kMaxPly) {
        MoveList legal;
        generate_legal(p, legal);
        const GameStatus status = game_status(p, legal);
        if (status.is_terminal()) return terminal_score(status, us, ply);
        if (ply >= kMaxPly) return evaluate(p, params_, seed_);
    }

    const int stand_pat = evaluate(p, params_, seed_);
    if (stand_pat >= beta) return stand_pat;
    alpha = std::max(alpha, stand_pat);

    MoveList moves;
    generate_tactical(p, moves);
    order(p, moves, 0, std::min(ply, kMaxPly));
    int best = stand_pat;
    for (const Move& m : moves) {
        const UndoToken t = make_move(p, m);
        if (in_check(p, us)) {
            undo_move(p, t);
            continue;
        }
        const int score = -quiesce(p, -beta, -alpha, ply + 1);
        undo_move(p, t);
        if (aborted_) return 0;
        if (score > best) {
            best = score;
            if (score > alpha) alpha = score;
            if (score >= beta) break;
        }
    }
    return best;
}

int Searcher::negamax(Position& p, int depth, int alpha, int beta, int ply) {
    ++nodes_;
    pv_len_[ply] = 0;
    if (out_of_budget()) return 0;
    if (ply > 0 && p.rules().threefold_repetition_draw && repeats(p)) return 0;

    MoveList moves;
    generate_legal(p, moves);
    const GameStatus status = game_status(p, moves);
    if (status.is_terminal()) return terminal_score(status, p.side_to_move(), ply);

    if (depth <= 0 || ply >= kMaxPly) return quiesce(p, alpha, beta, ply);

    const int alpha0 = alpha;
    std::uint16_t tt_move = 0;
    TTEntry& slot = tt_[p.hash() & (tt_.size() - 1)];
    if (use_tt_ && slot.key == p.hash()) {
        tt_move = slot.move;
        if (ply > 0 && slot.depth >= depth) {
            const int s = from_tt(slot.score, ply);
            if (slot.bound == kExact || (slot.bound == kLower && s >= beta) || (slot.bound == kUpper && s <= alpha))
                return s;
        }
    }

    order(p, moves, tt_move, ply);
    int best = -kInfinity;
    Move best_move = moves[0];
    for (const Move& m : moves) {
        const UndoToken t = make_move(p, m);
        const int score = -negamax(p, depth - 1, -beta, -alpha, ply + 1);
        undo_move(p, t);
        if (aborted_) return 0;
        if (score > best) {
            best = score;
            best_move = m;
            if (score > alpha) {
                alpha = score;
                pv_[ply][0] = m;
                std::copy_n(pv_[ply + 1].begin(), pv_len_[ply + 1], pv_[ply].begin() + 1);
                pv_len_[ply] = pv_len_[ply + 1] + 1;
            }
            if (score >= beta) {
                if (!m.is_tactical()) {
                    const std::uint16_t code = encode(m);
                    if (killers_[ply][0] != code) {
                        killers_[ply][1] = killers_[ply][0];
                        killers_[ply][0] = code;
                    }
                    history_[m.from][m.to] += depth * depth;
                }
                break;
            }
        }
    }

    if (use_tt_) {
        slot.key = p.hash();
        slot.score = static_cast<std::int16_t>(to_tt(best, ply));
        slot.depth = static_cast<std::int8_t>(depth);
        slot.bound = best >= beta ? kLower : (best > alpha0 ? kExact : kUpper);
        slot.move = encode(best_move);
    }
    return best;
}

SearchResult Searcher::search(const Position& root, const SearchLimits& limits, const EvalParams& params,
                              std::uint64_t seed, const std::atomic<bool>* stop, const InfoCallback& info) {
    if (!limits.any()) throw std::invalid_argument("search needs at least one limit");
    Position p = root;
    MoveList root_moves;
    generate_legal(p, root_moves);
    if (root_moves.empty()) throw SearchError("no legal moves in " + std::string(variant_name(p.variant())) + " position");

    const auto start = std::chrono::steady_clock::now();
    params_ = params;
    seed_ = seed;
    nodes_ = 0;
    aborted_ = false;
    stop_ = stop;
    deadline_.reset();
    node_budget_ = limits.max_nodes;
    if (limits.movetime) deadline_ = start + *limits.movetime;
    for (auto& k : killers_) k = {};
    for (auto& row : history_) row.fill(0);

    SearchResult result;
    result.best_move = root_moves[0];
    const int max_depth = std::min(limits.max_depth.value_or(kMaxPly - 1), kMaxPly - 1);
    for (int depth = 1; depth <= max_depth; ++depth) {
        // The first iteration always completes so that a move is known.
        const auto saved_deadline = deadline_;
        const auto saved_budget = node_budget_;
        if (depth == 1) {
            deadline_.reset();
            node_budget_.reset();
            stop_ = nullptr;
        }
        const int score = negamax(p, depth, -kInfinity, kInfinity, 0);
        if (depth == 1) {
            deadline_ = saved_deadline;
            node_budget_ = saved_budget;
            stop_ = stop;
        }
        if (aborted_) break;
        result.score = score;
        result.depth_reached = depth;
        result.principal_variation.assign(pv_[0].begin(), pv_[0].begin() + pv_len_[0]);
        if (!result.principal_variation.empty()) result.best_move = result.principal_variation.front();
        if (info)
            info({depth, score, nodes_,
                  std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start),
                  result.principal_variation});
        if (is_mate_score(score) && kMateScore - std::abs(score) <= depth) break;
        if ((stop_ && stop_->load()) || (deadline_ && std::chrono::steady_clock::now() >= *deadline_) ||
            (node_budget_ && nodes_ >= *node_budget_))
            break;
    }
    result.nodes = nodes_;
    return result;
}

std::vector<ScoredMove> Searcher::rank_root_moves(const Position& root, int depth, const EvalParams& params,
                                                  std::uint64_t seed) {
    Position p = root;
    MoveList moves;
    generate_legal(p, moves);
    params_ = params;
    seed_ = seed;
    aborted_ = false;
    stop_ = nullptr;
    deadline_.reset();
    node_budget_.reset();
    for (auto& k : killers_) k = {};
    for (auto& row : history_) row.fill(0);

    std::vector<ScoredMove> ranked;
    for (const Move& m : moves) {
        const UndoToken t = make_move(p, m);
        const int score = -negamax(p, std::max(depth - 1, 0), -kInfinity, kInfinity, 1);
        undo_move(p, t);
        ranked.push_back({m, score});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const ScoredMove& a, const ScoredMove& b) { return a.score > b.score; });
    return ranked;
}

SearchResult search(const Position& p, const SearchLimits& limits, const EvalParams& params, std::uint64_t seed) {
    Searcher s;
    return s.search(p, limits, params, seed);
}

}  // namespace zatrikion
