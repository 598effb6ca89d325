#include "zatrikion/board.hpp"

#include <algorithm>
#include <bit>

namespace zatrikion {

Coord parse_coord(std::string_view text) {
    if (text.size() != 2) throw ParseError("bad square '" + std::string(text) + "'");
    const int file = text[0] - 'a';
    const int ring = text[1] - '0';
    if (file < 0 || file >= kFiles) throw ParseError("bad file in square '" + std::string(text) + "'");
    if (ring < 1 || ring > kRings) throw ParseError("bad ring in square '" + std::string(text) + "'");
    return {ring, file};
}

std::string format_coord(Coord c) {
    return {static_cast<char>('a' + c.file), static_cast<char>('0' + c.ring)};
}

char piece_letter(Piece p) noexcept {
    char c = '?';
    switch (p.kind) {
        case PieceKind::King: c = 'K'; break;
        case PieceKind::Queen: c = 'Q'; break;
        case PieceKind::Rook: c = 'R'; break;
        case PieceKind::Bishop: c = 'B'; break;
        case PieceKind::Knight: c = 'N'; break;
        case PieceKind::Pawn: c = p.dir == PawnDir::Clockwise ? 'P' : 'S'; break;
    }
    return p.color == Color::White ? c : static_cast<char>(c - 'A' + 'a');
}

std::optional<Piece> piece_from_letter(char c) noexcept {
    const Color color = (c >= 'a' && c <= 'z') ? Color::Black : Color::White;
    const char u = color == Color::Black ? static_cast<char>(c - 'a' + 'A') : c;
    switch (u) {
        case 'K': return Piece::make(color, PieceKind::King);
        case 'Q': return Piece::make(color, PieceKind::Queen);
        case 'R': return Piece::make(color, PieceKind::Rook);
        case 'B': return Piece::make(color, PieceKind::Bishop);
        case 'N': return Piece::make(color, PieceKind::Knight);
        case 'P': return Piece::pawn(color, PawnDir::Clockwise);
        case 'S': return Piece::pawn(color, PawnDir::Counterclockwise);
        default: return std::nullopt;
    }
}

std::string_view variant_name(Variant v) noexcept {
    switch (v) {
        case Variant::ByzantineRegular: return "byzantine-regular";
        case Variant::ByzantineSymmetric: return "byzantine-symmetric";
        case Variant::CircularFIDE: return "circular";
    }
    return "?";
}

Variant parse_variant(std::string_view name) {
    if (name == "byzantine-regular" || name == "regular") return Variant::ByzantineRegular;
    if (name == "byzantine-symmetric" || name == "symmetric") return Variant::ByzantineSymmetric;
    if (name == "circular" || name == "circular-fide") return Variant::CircularFIDE;
    throw ParseError("unknown variant '" + std::string(name) + "'");
}

RuleConfig RuleConfig::defaults(Variant v) noexcept {
    RuleConfig r;
    if (is_byzantine(v)) {
        r.double_step = false;
        r.en_passant = false;
        r.promotion = false;
        r.stalemate_is_win = true;
        r.bare_king_rule = true;
    } else {
        r.stalemate_is_win = false;
        r.bare_king_rule = false;
    }
    return r;
}

// ── Zobrist ─────────────────────────────────────────────────────────────────
namespace zobrist {
namespace {

constexpr std::uint64_t splitmix(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// piece code: kind 0..4 for non-pawns, 5 clockwise pawn, 6 counterclockwise pawn
constexpr int kCodes = 7;

struct Keys {
    std::array<std::array<std::array<std::uint64_t, kCodes>, 2>, kSquares> piece{};
    std::array<std::uint64_t, kSquares> ep{};
    std::uint64_t side = 0;
};

constexpr Keys make_keys() {
    Keys k;
    std::uint64_t state = 0x5A7121C10ULL;
    for (auto& sq : k.piece)
        for (auto& col : sq)
            for (auto& v : col) v = splitmix(state);
    for (auto& v : k.ep) v = splitmix(state);
    k.side = splitmix(state);
    return k;
}

constexpr Keys kKeys = make_keys();

constexpr int code_of(Piece p) noexcept {
    if (!p.is_pawn()) return index_of(p.kind);
    return p.dir == PawnDir::Clockwise ? 5 : 6;
}

}  // namespace

std::uint64_t piece_key(Square sq, Piece p) noexcept { return kKeys.piece[sq][index_of(p.color)][code_of(p)]; }
std::uint64_t side_key() noexcept { return kKeys.side; }
std::uint64_t ep_key(Square sq) noexcept { return kKeys.ep[sq]; }

}  // namespace zobrist

std::uint64_t zobrist_hash(const Position& p) noexcept {
    std::uint64_t h = 0;
    for (Square sq = 0; sq < kSquares; ++sq)
        if (auto pc = p.at(sq)) h ^= zobrist::piece_key(sq, *pc);
    if (p.side_to_move() == Color::Black) h ^= zobrist::side_key();
    if (auto ep = p.ep_target()) h ^= zobrist::ep_key(*ep);
    return h;
}

// ── Position ────────────────────────────────────────────────────────────────
Position::Position(Variant v) : Position(v, RuleConfig::defaults(v)) {}

Position::Position(Variant v, RuleConfig rules) : variant_(v), rules_(rules) { reset_history(); }

void Position::put(Square sq, Piece p) {
    if (squares_[sq]) remove(sq);
    squares_[sq] = p;
    hash_ ^= zobrist::piece_key(sq, p);
    const int c = index_of(p.color);
    ++counts_[c][index_of(p.kind)];
    if (p.kind == PieceKind::King)
        kings_[c] = sq;
    else
        ++non_king_[c];
    if (p.is_pawn()) pawns_[c] |= std::uint64_t{1} << sq;
}

void Position::remove(Square sq) {
    const auto old = squares_[sq];
    if (!old) return;
    squares_[sq].reset();
    hash_ ^= zobrist::piece_key(sq, *old);
    const int c = index_of(old->color);
    --counts_[c][index_of(old->kind)];
    if (old->kind == PieceKind::King) {
        if (counts_[c][index_of(PieceKind::King)] == 0) kings_[c] = 0;
    } else {
        --non_king_[c];
    }
    if (old->is_pawn()) pawns_[c] &= ~(std::uint64_t{1} << sq);
}

void Position::set_side_to_move(Color c) {
    if (c != side_) hash_ ^= zobrist::side_key();
    side_ = c;
}

void Position::set_ep_target(std::optional<Square> sq) {
    if (ep_) hash_ ^= zobrist::ep_key(*ep_);
    ep_ = sq;
    if (ep_) hash_ ^= zobrist::ep_key(*ep_);
}

void Position::reset_history() {
    history_.clear();
    history_.push_back(hash_);
}

std::optional<Square> Position::king_square(Color c) const noexcept {
    if (counts_[index_of(c)][index_of(PieceKind::King)] == 0) return std::nullopt;
    return kings_[index_of(c)];
}

int Position::repetition_count() const noexcept {
    // Captures are irreversible, so earlier entries can never match.
    const auto n = static_cast<std::ptrdiff_t>(history_.size());
    const auto window = std::min<std::ptrdiff_t>(n, no_capture_clock_ + 1);
    return static_cast<int>(std::count(history_.end() - window, history_.end(), hash_));
}

bool Position::structurally_valid() const noexcept {
    return counts_[0][index_of(PieceKind::King)] == 1 && counts_[1][index_of(PieceKind::King)] == 1;
}

Position initial_position(Variant v) { return initial_position(v, RuleConfig::defaults(v)); }

Position initial_position(Variant v, RuleConfig rules) {
    Position p(v, rules);
    constexpr std::array<PieceKind, 4> kLeft{PieceKind::Queen, PieceKind::Bishop, PieceKind::Knight, PieceKind::Rook};
    constexpr std::array<PieceKind, 4> kRight{PieceKind::King, PieceKind::Bishop, PieceKind::Knight, PieceKind::Rook};
    for (int ring = 1; ring <= kRings; ++ring) {
        const int i = ring - 1;
        p.put(make_square(ring, 2), Piece::pawn(Color::White, PawnDir::Counterclockwise));
        p.put(make_square(ring, 5), Piece::pawn(Color::White, PawnDir::Clockwise));
        p.put(make_square(ring, 10), Piece::pawn(Color::Black, PawnDir::Counterclockwise));
        p.put(make_square(ring, 13), Piece::pawn(Color::Black, PawnDir::Clockwise));
        p.put(make_square(ring, 3), Piece::make(Color::White, kLeft[i]));
        p.put(make_square(ring, 4), Piece::make(Color::White, kRight[i]));
        p.put(make_square(ring, 11), Piece::make(Color::Black, kRight[i]));
        p.put(make_square(ring, 12), Piece::make(Color::Black, kLeft[i]));
    }
    if (v == Variant::ByzantineSymmetric) {
        p.put(make_square(1, 3), Piece::make(Color::White, PieceKind::King));
        p.put(make_square(1, 4), Piece::make(Color::White, PieceKind::Queen));
    }
    p.reset_history();
    return p;
}

Position mirror(const Position& p) {
    Position m(p.variant(), p.rules());
    for (Square sq = 0; sq < kSquares; ++sq) {
        const auto pc = p.at(sq);
        if (!pc) continue;
        m.put(make_square(ring_of(sq), 15 - file_of(sq)), Piece{~pc->color, pc->kind, reverse(pc->dir)});
    }
    if (auto ep = p.ep_target()) m.set_ep_target(make_square(ring_of(*ep), 15 - file_of(*ep)));
    m.set_side_to_move(~p.side_to_move());
    m.set_no_capture_clock(p.no_capture_clock());
    m.set_fullmove(p.fullmove());
    m.reset_history();
    return m;
}

}  // namespace zatrikion
