#include "zatrikion/cfen.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace zatrikion {

namespace {

[[noreturn]] void fail(std::size_t index, const std::string& what) {
    throw ParseError("cfen: " + what + " at index " + std::to_string(index));
}

int parse_number(std::string_view text, std::size_t offset, const char* field) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0)
        fail(offset, std::string("bad ") + field + " '" + std::string(text) + "'");
    return value;
}

}  // namespace

Position parse_cfen(std::string_view text, Variant v) { return parse_cfen(text, v, RuleConfig::defaults(v)); }

Position parse_cfen(std::string_view text, Variant v, RuleConfig rules) {
    // Split into whitespace-separated fields, remembering offsets for error messages.
    std::vector<std::pair<std::string_view, std::size_t>> fields;
    for (std::size_t i = 0; i < text.size();) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        fields.emplace_back(text.substr(i, j - i), i);
        i = j;
    }
    if (fields.size() != 5) fail(text.size(), "expected 5 fields, got " + std::to_string(fields.size()));

    Position p(v, rules);
    const auto [board, board_at] = fields[0];
    int ring = 1;
    int file = 0;
    for (std::size_t i = 0; i < board.size(); ++i) {
        const char c = board[i];
        const std::size_t at = board_at + i;
        if (c == '/') {
            if (file != kFiles) fail(at, "ring " + std::to_string(ring) + " has " + std::to_string(file) + " squares");
            if (++ring > kRings) fail(at, "too many rings");
            file = 0;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            int run = c - '0';
            while (i + 1 < board.size() && std::isdigit(static_cast<unsigned char>(board[i + 1])))
                run = run * 10 + (board[++i] - '0');
            if (run == 0) fail(at, "zero-length gap");
            file += run;
            if (file > kFiles) fail(at, "ring " + std::to_string(ring) + " has more than 16 squares");
        } else if (const auto pc = piece_from_letter(c)) {
            if (file >= kFiles) fail(at, "ring " + std::to_string(ring) + " has more than 16 squares");
            p.put(make_square(ring, file), *pc);
            ++file;
        } else {
            fail(at, std::string("unknown piece letter '") + c + "'");
        }
    }
    if (ring != kRings) fail(board_at + board.size(), "expected 4 rings, got " + std::to_string(ring));
    if (file != kFiles)
        fail(board_at + board.size(), "ring " + std::to_string(ring) + " has " + std::to_string(file) + " squares");

    const auto [side, side_at] = fields[1];
    if (side == "w")
        p.set_side_to_move(Color::White);
    else if (side == "b")
        p.set_side_to_move(Color::Black);
    else
        fail(side_at, "bad side to move '" + std::string(side) + "'");

    const auto [ep, ep_at] = fields[2];
    if (ep != "-") {
        try {
            p.set_ep_target(parse_coord(ep).square());
        } catch (const ParseError&) {
            fail(ep_at, "bad en passant square '" + std::string(ep) + "'");
        }
    }
    p.set_no_capture_clock(parse_number(fields[3].first, fields[3].second, "no-capture clock"));
    const int fullmove = parse_number(fields[4].first, fields[4].second, "fullmove number");
    if (fullmove < 1) fail(fields[4].second, "fullmove number must be positive");
    p.set_fullmove(fullmove);
    p.reset_history();
    return p;
}

std::string format_cfen(const Position& p) {
    std::string out;
    for (int ring = 1; ring <= kRings; ++ring) {
        if (ring > 1) out += '/';
        int gap = 0;
        for (int file = 0; file < kFiles; ++file) {
            const auto pc = p.at(make_square(ring, file));
            if (!pc) {
                ++gap;
                continue;
            }
            if (gap) out += std::to_string(gap);
            gap = 0;
            out += piece_letter(*pc);
        }
        if (gap) out += std::to_string(gap);
    }
    out += p.side_to_move() == Color::White ? " w " : " b ";
    out += p.ep_target() ? square_name(*p.ep_target()) : "-";
    out += ' ' + std::to_string(p.no_capture_clock()) + ' ' + std::to_string(p.fullmove());
    return out;
}

}  // namespace zatrikion
