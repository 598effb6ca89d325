#pragma once

/// @file board.hpp
/// Annular board geometry, piece taxonomy, variants and the Position value type.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zatrikion {

inline constexpr int kRings = 4;
inline constexpr int kFiles = 16;
inline constexpr int kSquares = kRings * kFiles;

// ── Square / Coord ──────────────────────────────────────────────────────────
// Square index = (ring - 1) * 16 + file. Ring 1 is the king/queen home ring.
using Square = std::uint8_t;

[[nodiscard]] constexpr int ring_of(Square sq) noexcept { return sq / kFiles + 1; }
[[nodiscard]] constexpr int file_of(Square sq) noexcept { return sq % kFiles; }
[[nodiscard]] constexpr int wrap_file(int f) noexcept { return ((f % kFiles) + kFiles) % kFiles; }
[[nodiscard]] constexpr Square make_square(int ring, int file) noexcept {
    return static_cast<Square>((ring - 1) * kFiles + wrap_file(file));
}

struct Coord {
    int ring = 1;  // 1..4
    int file = 0;  // 0..15, clockwise = increasing

    [[nodiscard]] constexpr bool valid() const noexcept {
        return ring >= 1 && ring <= kRings && file >= 0 && file < kFiles;
    }
    [[nodiscard]] constexpr Square square() const noexcept { return make_square(ring, file); }
    [[nodiscard]] static constexpr Coord of(Square sq) noexcept { return {ring_of(sq), file_of(sq)}; }

    friend constexpr bool operator==(const Coord&, const Coord&) = default;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "a1".."p4": file letter a..p, ring digit 1..4.
[[nodiscard]] Coord parse_coord(std::string_view text);
[[nodiscard]] std::string format_coord(Coord c);
[[nodiscard]] inline std::string square_name(Square sq) { return format_coord(Coord::of(sq)); }

/// Parity of a square; fers and alfil never leave their starting parity.
[[nodiscard]] constexpr int square_parity(Coord c) noexcept { return (c.ring + c.file) % 2; }

// ── Color / pieces ──────────────────────────────────────────────────────────
enum class Color : std::uint8_t { White = 0, Black = 1 };

[[nodiscard]] constexpr Color operator~(Color c) noexcept {
    return static_cast<Color>(static_cast<int>(c) ^ 1);
}
[[nodiscard]] constexpr int index_of(Color c) noexcept { return static_cast<int>(c); }

enum class PieceKind : std::uint8_t { King, Queen, Rook, Bishop, Knight, Pawn };
inline constexpr int kPieceKinds = 6;

[[nodiscard]] constexpr int index_of(PieceKind k) noexcept { return static_cast<int>(k); }

/// Travel direction of a pawn; the value is the file delta of one step.
enum class PawnDir : std::int8_t { None = 0, Clockwise = 1, Counterclockwise = -1 };

[[nodiscard]] constexpr int delta_of(PawnDir d) noexcept { return static_cast<int>(d); }
[[nodiscard]] constexpr PawnDir reverse(PawnDir d) noexcept {
    return static_cast<PawnDir>(-static_cast<int>(d));
}

struct Piece {
    Color color = Color::White;
    PieceKind kind = PieceKind::King;
    PawnDir dir = PawnDir::None;  // set iff kind == Pawn

    [[nodiscard]] static constexpr Piece make(Color c, PieceKind k) noexcept { return {c, k, PawnDir::None}; }
    [[nodiscard]] static constexpr Piece pawn(Color c, PawnDir d) noexcept { return {c, PieceKind::Pawn, d}; }
    [[nodiscard]] constexpr bool is_pawn() const noexcept { return kind == PieceKind::Pawn; }

    friend constexpr bool operator==(const Piece&, const Piece&) = default;
};

/// cFEN letter: K Q R B N, P = clockwise pawn, S = counterclockwise pawn; lowercase for Black.
[[nodiscard]] char piece_letter(Piece p) noexcept;
[[nodiscard]] std::optional<Piece> piece_from_letter(char c) noexcept;

// ── Coordinate arithmetic ───────────────────────────────────────────────────
enum class Rotation : std::int8_t { Clockwise = 1, Counterclockwise = -1 };

[[nodiscard]] constexpr Coord advance(Coord c, Rotation dir, int steps) noexcept {
    return {c.ring, wrap_file(c.file + static_cast<int>(dir) * steps)};
}

// ── Variants and rules ──────────────────────────────────────────────────────
enum class Variant : std::uint8_t { ByzantineRegular, ByzantineSymmetric, CircularFIDE };

[[nodiscard]] constexpr bool is_byzantine(Variant v) noexcept { return v != Variant::CircularFIDE; }
[[nodiscard]] std::string_view variant_name(Variant v) noexcept;
/// Accepts "byzantine-regular", "byzantine-symmetric", "circular" (and "circular-fide").
[[nodiscard]] Variant parse_variant(std::string_view name);

struct RuleConfig {
    bool annihilation = true;
    bool double_step = true;  // CircularFIDE only
    bool en_passant = true;   // CircularFIDE only
    bool promotion = true;    // CircularFIDE only
    bool stalemate_is_win = true;
    bool bare_king_rule = true;
    bool threefold_repetition_draw = true;

    [[nodiscard]] static RuleConfig defaults(Variant v) noexcept;

    friend bool operator==(const RuleConfig&, const RuleConfig&) = default;
};

// Home files of the pawns; a pawn's direction is fixed by which side of its camp it starts on.
[[nodiscard]] constexpr int pawn_start_file(Color c, PawnDir d) noexcept {
    if (c == Color::White) return d == PawnDir::Clockwise ? 5 : 2;
    return d == PawnDir::Clockwise ? 13 : 10;
}
/// Circular promotion file: the home file of the enemy pawns travelling toward this one.
[[nodiscard]] constexpr int pawn_promotion_file(Color c, PawnDir d) noexcept {
    return pawn_start_file(~c, reverse(d));
}

// ── Position ────────────────────────────────────────────────────────────────
namespace detail {
struct MoveAccess;
}

class Position {
public:
    /// Empty board, White to move.
    explicit Position(Variant v = Variant::ByzantineRegular);
    Position(Variant v, RuleConfig rules);

    [[nodiscard]] std::optional<Piece> at(Square sq) const noexcept { return squares_[sq]; }
    [[nodiscard]] std::optional<Piece> at(Coord c) const noexcept { return squares_[c.square()]; }
    [[nodiscard]] bool empty(Square sq) const noexcept { return !squares_[sq].has_value(); }

    /// Setup primitives. They keep the hash and piece counts in sync but do not touch history.
    void put(Square sq, Piece p);
    void remove(Square sq);
    void set_side_to_move(Color c);
    void set_ep_target(std::optional<Square> sq);
    void set_no_capture_clock(int plies) noexcept { no_capture_clock_ = plies; }
    void set_fullmove(int n) noexcept { fullmove_ = n; }
    /// Discards the history and starts a new one at the current position.
    void reset_history();

    [[nodiscard]] Variant variant() const noexcept { return variant_; }
    [[nodiscard]] const RuleConfig& rules() const noexcept { return rules_; }
    void set_rules(RuleConfig r) noexcept { rules_ = r; }

    [[nodiscard]] Color side_to_move() const noexcept { return side_; }
    [[nodiscard]] std::optional<Square> ep_target() const noexcept { return ep_; }
    [[nodiscard]] int no_capture_clock() const noexcept { return no_capture_clock_; }
    [[nodiscard]] int fullmove() const noexcept { return fullmove_; }
    [[nodiscard]] const std::vector<std::uint64_t>& history() const noexcept { return history_; }
    [[nodiscard]] std::uint64_t hash() const noexcept { return hash_; }

    /// Square of the king, or nullopt if absent (only in malformed setups).
    [[nodiscard]] std::optional<Square> king_square(Color c) const noexcept;
    [[nodiscard]] int non_king_count(Color c) const noexcept { return non_king_[index_of(c)]; }
    [[nodiscard]] int piece_count(Color c, PieceKind k) const noexcept {
        return counts_[index_of(c)][index_of(k)];
    }
    [[nodiscard]] std::uint64_t pawn_mask(Color c) const noexcept { return pawns_[index_of(c)]; }

    /// Number of times the current position occurred, counting only the reversible tail of the history.
    [[nodiscard]] int repetition_count() const noexcept;

    /// Exactly one king per colour and no side to move able to capture a king.
    [[nodiscard]] bool structurally_valid() const noexcept;

    friend bool operator==(const Position&, const Position&) = default;

private:
    friend struct detail::MoveAccess;

    std::array<std::optional<Piece>, kSquares> squares_{};
    Variant variant_;
    RuleConfig rules_;
    Color side_ = Color::White;
    std::optional<Square> ep_;
    int no_capture_clock_ = 0;
    int fullmove_ = 1;
    std::vector<std::uint64_t> history_;

    std::uint64_t hash_ = 0;
    std::array<std::array<int, kPieceKinds>, 2> counts_{};
    std::array<int, 2> non_king_{};
    std::array<std::uint64_t, 2> pawns_{};
    std::array<Square, 2> kings_{};
};

[[nodiscard]] Position initial_position(Variant v);
[[nodiscard]] Position initial_position(Variant v, RuleConfig rules);

/// True iff colour c has nothing but its king.
[[nodiscard]] inline bool is_bare(const Position& p, Color c) noexcept { return p.non_king_count(c) == 0; }

/// Colour reflection: swaps colours, maps file f to 15 - f (so the camps trade places),
/// reverses pawn directions and hands the move to the other side.
[[nodiscard]] Position mirror(const Position& p);

// ── Zobrist keys ────────────────────────────────────────────────────────────
namespace zobrist {
[[nodiscard]] std::uint64_t piece_key(Square sq, Piece p) noexcept;
[[nodiscard]] std::uint64_t side_key() noexcept;
[[nodiscard]] std::uint64_t ep_key(Square sq) noexcept;
}  // namespace zobrist

/// Full recomputation; equals Position::hash() whenever the incremental update is correct.
[[nodiscard]] std::uint64_t zobrist_hash(const Position& p) noexcept;

}  // namespace zatrikion
