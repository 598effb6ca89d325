#pragma once

/// @file movegen.hpp
/// Move representation, generation, attack detection and reversible move application.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "zatrikion/board.hpp"

namespace zatrikion {

struct Removal {
    Square square = 0;
    Piece piece;
    friend constexpr bool operator==(const Removal&, const Removal&) = default;
};

/// Own pawns removed by the annihilation rule. Legal play from a start position removes at most
/// one pair per move; the extra room covers hand-built setups holding several pairs.
inline constexpr std::size_t kMaxAnnihilated = 8;

struct Move {
    Square from = 0;
    Square to = 0;
    std::optional<Piece> captured;
    std::optional<PieceKind> promotion;
    bool is_en_passant = false;
    bool is_double_step = false;
    std::uint8_t annihilated_count = 0;
    std::array<Removal, kMaxAnnihilated> annihilated{};

    [[nodiscard]] std::span<const Removal> annihilations() const noexcept {
        return {annihilated.data(), annihilated_count};
    }
    [[nodiscard]] bool is_capture() const noexcept { return captured.has_value(); }
    /// Captures and annihilations change material; quiescence looks at exactly these.
    [[nodiscard]] bool is_tactical() const noexcept {
        return captured.has_value() || annihilated_count > 0 || promotion.has_value();
    }
    /// Same from/to/promotion; side effects follow from the position.
    [[nodiscard]] bool same_action(const Move& o) const noexcept {
        return from == o.from && to == o.to && promotion == o.promotion;
    }

    friend bool operator==(const Move&, const Move&) = default;
};

/// Fixed-capacity move buffer; no allocation in the search hot path.
class MoveList {
public:
    static constexpr std::size_t kCapacity = 384;

    void push(const Move& m) noexcept { moves_[size_++] = m; }
    void clear() noexcept { size_ = 0; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] bool empty() const noexcept { return size_ == 0; }
    [[nodiscard]] Move& operator[](std::size_t i) noexcept { return moves_[i]; }
    [[nodiscard]] const Move& operator[](std::size_t i) const noexcept { return moves_[i]; }
    [[nodiscard]] Move* begin() noexcept { return moves_.data(); }
    [[nodiscard]] Move* end() noexcept { return moves_.data() + size_; }
    [[nodiscard]] const Move* begin() const noexcept { return moves_.data(); }
    [[nodiscard]] const Move* end() const noexcept { return moves_.data() + size_; }
    void truncate(std::size_t n) noexcept { size_ = n; }

private:
    std::array<Move, kCapacity> moves_;
    std::size_t size_ = 0;
};

class IllegalMoveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StaleUndoError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Everything needed to restore the position as it was before apply_move.
struct UndoToken {
    Move move;
    Piece moved;
    std::optional<Square> prev_ep;
    int prev_no_capture_clock = 0;
    int prev_fullmove = 1;
    std::uint64_t prev_hash = 0;
    std::uint64_t hash_after = 0;
    std::size_t history_size_after = 0;
};

/// Pseudo-legal moves (king safety not checked). Annihilation side effects are filled in.
void generate_pseudo_legal(const Position& p, MoveList& out);
/// Only the captures, annihilating moves and promotions among the pseudo-legal moves.
void generate_tactical(const Position& p, MoveList& out);
void generate_legal(const Position& p, MoveList& out);
/// Same result; p is modified while testing king safety and restored before returning.
void generate_legal(Position& p, MoveList& out);

[[nodiscard]] MoveList pseudo_legal_moves(const Position& p);
[[nodiscard]] MoveList legal_moves(const Position& p);

[[nodiscard]] bool is_attacked(const Position& p, Square target, Color by) noexcept;
[[nodiscard]] bool in_check(const Position& p, Color c) noexcept;
/// Number of squares the pieces of colour c could move to (pseudo-legal, side to move ignored).
[[nodiscard]] int mobility(const Position& p, Color c) noexcept;

/// Unchecked application: the caller guarantees m was generated for p.
UndoToken make_move(Position& p, const Move& m);
/// Checked application: rejects moves that are not legal in p.
UndoToken apply_move(Position& p, const Move& m);
/// Restores the position to its state before the matching apply; rejects stale tokens.
void undo_move(Position& p, const UndoToken& t);

/// Leaf-node count of the legal move tree.
[[nodiscard]] std::uint64_t perft(Position& p, int depth);

/// "c1b1", with "=Q" style suffix for promotions.
[[nodiscard]] std::string move_to_text(const Move& m);
/// Looks the text up among the legal moves of p.
[[nodiscard]] Move parse_move(const Position& p, std::string_view text);

/// All pairs of own facing pawns of colour c: (r,f) clockwise with (r,f+1) counterclockwise.
[[nodiscard]] int facing_pawn_pairs(const Position& p, Color c) noexcept;

}  // namespace zatrikion
