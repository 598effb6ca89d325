#pragma once

/// @file cfen.hpp
/// Circular FEN: four 16-square ring strings (ring 1 first) separated by '/', digits for
/// empty runs, K Q R B N, P for clockwise and S for counterclockwise pawns (uppercase White),
/// then side to move, en passant square or '-', no-capture clock and fullmove number.
/// The variant is not part of the text; the caller supplies it.

#include <string>
#include <string_view>

#include "zatrikion/board.hpp"

namespace zatrikion {

[[nodiscard]] Position parse_cfen(std::string_view text, Variant v);
[[nodiscard]] Position parse_cfen(std::string_view text, Variant v, RuleConfig rules);
[[nodiscard]] std::string format_cfen(const Position& p);

}  // namespace zatrikion
