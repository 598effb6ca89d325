#pragma once

/// @file endgame.hpp
/// Retrograde solver for pawnless Byzantine endings with at most four pieces.
///
/// States are indexed with the white king rotated onto file 0; rotations of a
/// position share one entry and probe() normalizes before looking up.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zatrikion/adjudicator.hpp"
#include "zatrikion/board.hpp"

namespace zatrikion {

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-king pieces per colour, kept in K Q R B N letter order.
struct Material {
    std::vector<PieceKind> white;
    std::vector<PieceKind> black;

    /// "KN-KB": white pieces, '-', black pieces, each starting with K.
    [[nodiscard]] static Material parse(std::string_view text);
    [[nodiscard]] static Material of(const Position& p);
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] int piece_count() const noexcept { return 2 + static_cast<int>(white.size() + black.size()); }

    friend bool operator==(const Material&, const Material&) = default;
};

class OracleValue {
public:
    enum class Outcome : std::uint8_t { Draw, Win, Loss };

    [[nodiscard]] static constexpr OracleValue draw() noexcept { return {Outcome::Draw, 0}; }
    [[nodiscard]] static constexpr OracleValue win(int plies) noexcept { return {Outcome::Win, plies}; }
    [[nodiscard]] static constexpr OracleValue loss(int plies) noexcept { return {Outcome::Loss, plies}; }

    [[nodiscard]] constexpr Outcome outcome() const noexcept { return outcome_; }
    /// Plies to the deciding terminal state; 0 for draws.
    [[nodiscard]] constexpr int plies() const noexcept { return plies_; }
    [[nodiscard]] constexpr bool is_win() const noexcept { return outcome_ == Outcome::Win; }
    [[nodiscard]] constexpr bool is_loss() const noexcept { return outcome_ == Outcome::Loss; }
    [[nodiscard]] constexpr bool is_draw() const noexcept { return outcome_ == Outcome::Draw; }

    /// 0 = draw, 1..127 = win in (byte - 1), 128..254 = loss in (byte - 128).
    [[nodiscard]] std::uint8_t to_byte() const;
    [[nodiscard]] static OracleValue from_byte(std::uint8_t b);
    /// "draw", "win 5", "loss 4".
    [[nodiscard]] std::string to_string() const;

    friend constexpr bool operator==(const OracleValue&, const OracleValue&) = default;

private:
    constexpr OracleValue(Outcome o, int plies) noexcept : outcome_(o), plies_(plies) {}

    Outcome outcome_;
    int plies_;
};

inline constexpr std::uint8_t kIllegalState = 255;
inline constexpr int kMaxOraclePlies = 126;

/// Value of a terminal status for its side to move, nullopt while the game goes on.
[[nodiscard]] std::optional<OracleValue> terminal_value(const GameStatus& status, Color side_to_move);

/// A baring capture has just happened and the bared side is to move with its riposte still open.
[[nodiscard]] inline bool pending_bare(const Position& p) noexcept {
    return is_bare(p, p.side_to_move()) && !is_bare(p, ~p.side_to_move());
}

struct TableStats {
    std::uint64_t legal_states = 0;
    std::uint64_t draws = 0;
    std::uint64_t white_wins = 0;  // won for White whoever is to move
    std::uint64_t black_wins = 0;
    int longest_win = 0;  // plies

    [[nodiscard]] double draw_fraction() const noexcept {
        return legal_states ? static_cast<double>(draws) / static_cast<double>(legal_states) : 0.0;
    }
};

struct ConsistencyReport {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    std::string first_violation;  // cFEN and reason of the first failure

    [[nodiscard]] bool ok() const noexcept { return violations == 0; }
};

class EndgameTable {
public:
    /// Throws OracleError for pawns, more than four pieces or a variant other than ByzantineRegular.
    [[nodiscard]] static EndgameTable solve(const Material& material, Variant v = Variant::ByzantineRegular);
    [[nodiscard]] static EndgameTable load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    /// Throws OracleError when the position's material differs from the table's.
    [[nodiscard]] OracleValue probe(const Position& p) const;

    [[nodiscard]] const Material& material() const noexcept { return material_; }
    [[nodiscard]] Variant variant() const noexcept { return variant_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::uint8_t raw(std::size_t index) const { return values_.at(index); }

    /// ((((wk_ring - 1) * 64 + s1) * 64 + s2) * 64 + s3) * 2 + stm after rotating the white king to file 0;
    /// s1.. are the black king, then white and black pieces in material order.
    [[nodiscard]] std::size_t index_of(const Position& p) const;
    /// The normalized position behind an index, nullopt for overlapping pieces.
    [[nodiscard]] std::optional<Position> position_at(std::size_t index) const;

    [[nodiscard]] TableStats stats() const;
    /// Re-derives every value from its successors by forward move generation.
    [[nodiscard]] ConsistencyReport verify() const;

private:
    EndgameTable(Material m, Variant v);

    [[nodiscard]] std::vector<Piece> piece_order() const;

    Material material_;
    Variant variant_;
    std::vector<std::uint8_t> values_;
};

}  // namespace zatrikion
