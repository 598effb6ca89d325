#pragma once

/// @file adjudicator.hpp
/// Terminal-state detection: mate, stalemate, the bare-king ladder and draws.

#include <optional>
#include <string>
#include <string_view>

#include "zatrikion/board.hpp"
#include "zatrikion/movegen.hpp"

namespace zatrikion {

enum class DrawReason { TwoBareKings, Repetition, NoCaptureLimit, PlyCap, InsufficientForce };

class GameStatus {
public:
    enum class Kind { Ongoing, Mate, StalemateWin, StalemateDraw, BareKingWin, Draw };

    [[nodiscard]] static constexpr GameStatus ongoing() noexcept { return {Kind::Ongoing, {}, {}}; }
    [[nodiscard]] static constexpr GameStatus mate(Color winner) noexcept { return {Kind::Mate, winner, {}}; }
    [[nodiscard]] static constexpr GameStatus stalemate_win(Color winner) noexcept {
        return {Kind::StalemateWin, winner, {}};
    }
    [[nodiscard]] static constexpr GameStatus stalemate_draw() noexcept { return {Kind::StalemateDraw, {}, {}}; }
    [[nodiscard]] static constexpr GameStatus bare_king_win(Color winner) noexcept {
        return {Kind::BareKingWin, winner, {}};
    }
    [[nodiscard]] static constexpr GameStatus draw(DrawReason r) noexcept { return {Kind::Draw, {}, r}; }

    [[nodiscard]] constexpr Kind kind() const noexcept { return kind_; }
    [[nodiscard]] constexpr bool is_terminal() const noexcept { return kind_ != Kind::Ongoing; }
    [[nodiscard]] constexpr bool is_draw() const noexcept {
        return kind_ == Kind::Draw || kind_ == Kind::StalemateDraw;
    }
    [[nodiscard]] constexpr bool is_decisive() const noexcept { return is_terminal() && !is_draw(); }
    /// Set for decisive results only.
    [[nodiscard]] constexpr std::optional<Color> winner() const noexcept { return winner_; }
    /// Set for Kind::Draw only.
    [[nodiscard]] constexpr std::optional<DrawReason> draw_reason() const noexcept { return reason_; }

    /// "ongoing", "1-0 mate", "0-1 bare-king", "1/2-1/2 repetition", ...
    [[nodiscard]] std::string to_string() const;
    /// Result token only: "1-0", "0-1", "1/2-1/2" or "*".
    [[nodiscard]] std::string result_token() const;
    /// Reason code only: "mate", "stalemate-win", "stalemate", "bare-king", "two-bare-kings", ...
    [[nodiscard]] std::string reason_code() const;
    [[nodiscard]] static GameStatus parse(std::string_view text);

    friend constexpr bool operator==(const GameStatus&, const GameStatus&) = default;

private:
    constexpr GameStatus(Kind k, std::optional<Color> w, std::optional<DrawReason> r) noexcept
        : kind_(k), winner_(w), reason_(r) {}

    Kind kind_;
    std::optional<Color> winner_;
    std::optional<DrawReason> reason_;
};

/// Terminal status of the position under its rule configuration.
[[nodiscard]] GameStatus game_status(const Position& p);
/// Same, reusing the already generated legal moves of p.
[[nodiscard]] GameStatus game_status(const Position& p, const MoveList& legal);

/// Whether the side to move can capture the opponent's last non-king piece.
[[nodiscard]] bool has_riposte(const Position& p, const MoveList& legal) noexcept;

}  // namespace zatrikion
