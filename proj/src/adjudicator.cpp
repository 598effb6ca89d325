#include "zatrikion/adjudicator.hpp"

#include <algorithm>

namespace zatrikion {

namespace {

constexpr std::string_view kDrawCodes[] = {"two-bare-kings", "repetition", "no-capture", "ply-cap",
                                           "insufficient-force"};

// K+N or K+B (slider) against a lone king cannot mate in the FIDE game.
bool insufficient_force(const Position& p, Color strong) {
    if (!is_bare(p, ~strong) || p.non_king_count(strong) != 1) return false;
    return p.piece_count(strong, PieceKind::Knight) == 1 || p.piece_count(strong, PieceKind::Bishop) == 1;
}

}  // namespace

std::string GameStatus::result_token() const {
    if (kind_ == Kind::Ongoing) return "*";
    if (is_draw()) return "1/2-1/2";
    return *winner_ == Color::White ? "1-0" : "0-1";
}

std::string GameStatus::reason_code() const {
    switch (kind_) {
        case Kind::Ongoing: return "ongoing";
        case Kind::Mate: return "mate";
        case Kind::StalemateWin: return "stalemate-win";
        case Kind::StalemateDraw: return "stalemate";
        case Kind::BareKingWin: return "bare-king";
        case Kind::Draw: return std::string(kDrawCodes[static_cast<int>(*reason_)]);
    }
    return "?";
}

std::string GameStatus::to_string() const {
    if (kind_ == Kind::Ongoing) return "ongoing";
    return result_token() + " " + reason_code();
}

GameStatus GameStatus::parse(std::string_view text) {
    if (text == "ongoing") return ongoing();
    const auto space = text.find(' ');
    if (space == std::string_view::npos) throw ParseError("bad status '" + std::string(text) + "'");
    const auto result = text.substr(0, space);
    const auto reason = text.substr(space + 1);
    std::optional<Color> winner;
    if (result == "1-0")
        winner = Color::White;
    else if (result == "0-1")
        winner = Color::Black;
    else if (result != "1/2-1/2")
        throw ParseError("bad result '" + std::string(result) + "'");

    if (winner) {
        if (reason == "mate") return mate(*winner);
        if (reason == "stalemate-win") return stalemate_win(*winner);
        if (reason == "bare-king") return bare_king_win(*winner);
    } else {
        if (reason == "stalemate") return stalemate_draw();
        for (int i = 0; i < 5; ++i)
            if (reason == kDrawCodes[i]) return draw(static_cast<DrawReason>(i));
    }
    throw ParseError("bad status reason '" + std::string(reason) + "'");
}

bool has_riposte(const Position& p, const MoveList& legal) noexcept {
    // With a single enemy non-king piece left, any capture takes it.
    if (p.non_king_count(~p.side_to_move()) != 1) return false;
    return std::any_of(legal.begin(), legal.end(), [](const Move& m) { return m.is_capture(); });
}

GameStatus game_status(const Position& p) {
    Position scratch = p;
    MoveList legal;
    generate_legal(scratch, legal);
    return game_status(p, legal);
}

GameStatus game_status(const Position& p, const MoveList& legal) {
    const Color us = p.side_to_move();
    const RuleConfig& rules = p.rules();

    if (legal.empty()) {
        if (in_check(p, us)) return GameStatus::mate(~us);
        return rules.stalemate_is_win ? GameStatus::stalemate_win(~us) : GameStatus::stalemate_draw();
    }

    const bool us_bare = is_bare(p, us);
    const bool them_bare = is_bare(p, ~us);
    if (us_bare && them_bare) return GameStatus::draw(DrawReason::TwoBareKings);
    if (rules.bare_king_rule) {
        if (us_bare)
            return has_riposte(p, legal) ? GameStatus::draw(DrawReason::TwoBareKings) : GameStatus::bare_king_win(~us);
        // Only reachable when a side bares itself through annihilation.
        if (them_bare) return GameStatus::bare_king_win(us);
    } else if (insufficient_force(p, us) || insufficient_force(p, ~us)) {
        return GameStatus::draw(DrawReason::InsufficientForce);
    }

    if (rules.threefold_repetition_draw && p.repetition_count() >= 3) return GameStatus::draw(DrawReason::Repetition);
    return GameStatus::ongoing();
}

}  // namespace zatrikion
