#include "zatrikion/movegen.hpp"

#include <bit>

namespace zatrikion {

// ── Geometry tables ─────────────────────────────────────────────────────────
namespace {

template <std::size_t N>
struct Targets {
    std::array<Square, N> sq{};
    std::uint8_t n = 0;
    constexpr void add(Square s) { sq[n++] = s; }
    [[nodiscard]] constexpr const Square* begin() const { return sq.data(); }
    [[nodiscard]] constexpr const Square* end() const { return sq.data() + n; }
};

struct Tables {
    std::array<Targets<8>, kSquares> knight{};
    std::array<Targets<8>, kSquares> king{};
    std::array<Targets<4>, kSquares> fers{};
    std::array<Targets<4>, kSquares> alfil{};
    // diagonal rays in order (+1,+1) (+1,-1) (-1,+1) (-1,-1); at most 3 squares each
    std::array<std::array<Targets<3>, 4>, kSquares> diag{};
    // radial rays: outward (ring+1), inward (ring-1)
    std::array<std::array<Targets<3>, 2>, kSquares> radial{};
};

constexpr bool ring_ok(int r) { return r >= 1 && r <= kRings; }

constexpr Tables make_tables() {
    Tables t;
    for (int s = 0; s < kSquares; ++s) {
        const int r = ring_of(static_cast<Square>(s));
        const int f = file_of(static_cast<Square>(s));
        auto add_if = [&](auto& list, int dr, int df) {
            if (ring_ok(r + dr)) list.add(make_square(r + dr, f + df));
        };
        for (auto [dr, df] : {std::pair{1, 2}, {1, -2}, {-1, 2}, {-1, -2}, {2, 1}, {2, -1}, {-2, 1}, {-2, -1}})
            add_if(t.knight[s], dr, df);
        for (auto [dr, df] : {std::pair{0, 1}, {0, -1}, {1, 0}, {-1, 0}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}})
            add_if(t.king[s], dr, df);
        for (auto [dr, df] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
            add_if(t.fers[s], dr, df);
            add_if(t.alfil[s], 2 * dr, 2 * df);
        }
        int i = 0;
        for (auto [dr, df] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
            for (int k = 1; ring_ok(r + k * dr); ++k) t.diag[s][i].add(make_square(r + k * dr, f + k * df));
            ++i;
        }
        for (int k = r + 1; k <= kRings; ++k) t.radial[s][0].add(make_square(k, f));
        for (int k = r - 1; k >= 1; --k) t.radial[s][1].add(make_square(k, f));
    }
    return t;
}

constexpr Tables kTables = make_tables();

constexpr Square step_file(Square sq, int df) { return make_square(ring_of(sq), file_of(sq) + df); }

}  // namespace

// ── Raw make/unmake (no legality, no history) ───────────────────────────────
namespace detail {

struct MoveAccess {
    struct Raw {
        Piece moved;
        std::optional<Square> prev_ep;
        int prev_clock;
        int prev_fullmove;
        std::uint64_t prev_hash;
    };

    static Square ep_victim(const Move& m, PawnDir capturer_dir) {
        return step_file(m.to, -delta_of(capturer_dir));
    }

    static Raw make(Position& p, const Move& m) {
        Raw raw{*p.squares_[m.from], p.ep_, p.no_capture_clock_, p.fullmove_, p.hash_};
        const Piece mover = raw.moved;
        if (m.is_en_passant)
            p.remove(ep_victim(m, mover.dir));
        else if (m.captured)
            p.remove(m.to);
        p.remove(m.from);
        p.put(m.to, m.promotion ? Piece::make(mover.color, *m.promotion) : mover);
        for (const auto& a : m.annihilations()) p.remove(a.square);

        p.set_ep_target(m.is_double_step ? std::optional<Square>(step_file(m.from, delta_of(mover.dir)))
                                         : std::nullopt);
        p.no_capture_clock_ = (m.captured || m.annihilated_count > 0) ? 0 : p.no_capture_clock_ + 1;
        if (p.side_ == Color::Black) ++p.fullmove_;
        p.set_side_to_move(~p.side_);
        return raw;
    }

    static void unmake(Position& p, const Move& m, const Raw& raw) {
        p.set_side_to_move(~p.side_);
        for (const auto& a : m.annihilations()) p.put(a.square, a.piece);
        p.remove(m.to);
        p.put(m.from, raw.moved);
        if (m.is_en_passant)
            p.put(ep_victim(m, raw.moved.dir), *m.captured);
        else if (m.captured)
            p.put(m.to, *m.captured);
        p.set_ep_target(raw.prev_ep);
        p.no_capture_clock_ = raw.prev_clock;
        p.fullmove_ = raw.prev_fullmove;
    }

    static void push_history(Position& p) { p.history_.push_back(p.hash_); }
    static void pop_history(Position& p) { p.history_.pop_back(); }
};

}  // namespace detail

using detail::MoveAccess;

// ── Attack detection ────────────────────────────────────────────────────────
namespace {

bool holds(const Position& p, Square sq, Color c, PieceKind k) {
    const auto pc = p.at(sq);
    return pc && pc->color == c && pc->kind == k;
}

template <std::size_t N>
std::optional<Piece> first_on_ray(const Position& p, const Targets<N>& ray) {
    for (Square s : ray)
        if (auto pc = p.at(s)) return pc;
    return std::nullopt;
}

}  // namespace

bool is_attacked(const Position& p, Square target, Color by) noexcept {
    const bool byz = is_byzantine(p.variant());
    for (Square s : kTables.knight[target])
        if (holds(p, s, by, PieceKind::Knight)) return true;
    for (Square s : kTables.king[target])
        if (holds(p, s, by, PieceKind::King)) return true;

    if (byz) {
        for (Square s : kTables.fers[target])
            if (holds(p, s, by, PieceKind::Queen)) return true;
        for (Square s : kTables.alfil[target])
            if (holds(p, s, by, PieceKind::Bishop)) return true;
    } else {
        for (const auto& ray : kTables.diag[target]) {
            const auto pc = first_on_ray(p, ray);
            if (pc && pc->color == by && (pc->kind == PieceKind::Bishop || pc->kind == PieceKind::Queen))
                return true;
        }
    }

    auto is_orthogonal_slider = [&](const Piece& pc) {
        return pc.color == by && (pc.kind == PieceKind::Rook || (!byz && pc.kind == PieceKind::Queen));
    };
    for (const auto& ray : kTables.radial[target]) {
        const auto pc = first_on_ray(p, ray);
        if (pc && is_orthogonal_slider(*pc)) return true;
    }
    for (int df : {1, -1}) {
        Square s = target;
        for (int k = 1; k < kFiles; ++k) {
            s = step_file(s, df);
            if (auto pc = p.at(s)) {
                if (is_orthogonal_slider(*pc)) return true;
                break;
            }
        }
    }

    // A pawn travelling with delta d attacks (r±1, f+d).
    const int r = ring_of(target);
    const int f = file_of(target);
    for (int dr : {1, -1}) {
        if (!ring_ok(r + dr)) continue;
        for (PawnDir d : {PawnDir::Clockwise, PawnDir::Counterclockwise}) {
            const auto pc = p.at(make_square(r + dr, f - delta_of(d)));
            if (pc && *pc == Piece::pawn(by, d)) return true;
        }
    }
    return false;
}

bool in_check(const Position& p, Color c) noexcept {
    const auto k = p.king_square(c);
    return k && is_attacked(p, *k, ~c);
}

// ── Generation ──────────────────────────────────────────────────────────────
namespace {

class Generator {
public:
    Generator(const Position& p, Color us, MoveList& out, bool tactical_only)
        : p_(p), us_(us), out_(out), tactical_only_(tactical_only), byz_(is_byzantine(p.variant())) {
        if (p.rules().annihilation) collect_existing_pairs();
    }

    void run() {
        for (Square sq = 0; sq < kSquares; ++sq) {
            const auto pc = p_.at(sq);
            if (!pc || pc->color != us_) continue;
            switch (pc->kind) {
                case PieceKind::King: leaper(sq, kTables.king[sq]); break;
                case PieceKind::Knight: leaper(sq, kTables.knight[sq]); break;
                case PieceKind::Rook: orthogonal(sq); break;
                case PieceKind::Queen:
                    if (byz_) {
                        leaper(sq, kTables.fers[sq]);
                    } else {
                        orthogonal(sq);
                        diagonal(sq);
                    }
                    break;
                case PieceKind::Bishop:
                    if (byz_)
                        leaper(sq, kTables.alfil[sq]);
                    else
                        diagonal(sq);
                    break;
                case PieceKind::Pawn: pawn(sq, *pc); break;
            }
        }
    }

private:
    void collect_existing_pairs() {
        std::uint64_t mask = p_.pawn_mask(us_);
        while (mask) {
            const auto sq = static_cast<Square>(std::countr_zero(mask));
            mask &= mask - 1;
            const Piece pc = *p_.at(sq);
            if (pc.dir != PawnDir::Clockwise) continue;
            const Square partner = step_file(sq, 1);
            if (p_.at(partner) == Piece::pawn(us_, PawnDir::Counterclockwise)) {
                pairs_[pair_count_++] = {sq, partner};
            }
        }
    }

    // Fills in annihilation side effects and emits the move.
    void emit(Move m) {
        if (p_.rules().annihilation) {
            for (std::size_t i = 0; i < pair_count_; ++i) {
                const auto [a, b] = pairs_[i];
                if (a == m.from || b == m.from) continue;
                add_removal(m, a);
                add_removal(m, b);
            }
            const Piece mover = *p_.at(m.from);
            if (mover.is_pawn() && !m.promotion) {
                const Square partner = step_file(m.to, delta_of(mover.dir));
                if (p_.at(partner) == Piece::pawn(us_, reverse(mover.dir))) {
                    m.annihilated[m.annihilated_count++] = {m.to, mover};
                    add_removal(m, partner);
                }
            }
        }
        if (tactical_only_ && !m.is_tactical()) return;
        out_.push(m);
    }

    void add_removal(Move& m, Square sq) const {
        if (m.annihilated_count < kMaxAnnihilated) m.annihilated[m.annihilated_count++] = {sq, *p_.at(sq)};
    }

    // Returns false if the square is blocked by an own piece.
    bool try_target(Square from, Square to) {
        const auto pc = p_.at(to);
        if (!pc) {
            if (!tactical_only_ || pair_count_ > 0) emit(Move{.from = from, .to = to});
            return true;
        }
        if (pc->color != us_) emit(Move{.from = from, .to = to, .captured = pc});
        return false;
    }

    template <std::size_t N>
    void leaper(Square from, const Targets<N>& targets) {
        for (Square to : targets) try_target(from, to);
    }

    template <std::size_t N>
    void slide(Square from, const Targets<N>& ray) {
        for (Square to : ray)
            if (!try_target(from, to) || p_.at(to)) break;
    }

    void orthogonal(Square from) {
        for (const auto& ray : kTables.radial[from]) slide(from, ray);
        // Along the ring: clockwise first, then counterclockwise stopping short of
        // any square the clockwise walk already reached.
        int reached = 0;
        Square s = from;
        while (reached < kFiles - 1) {
            s = step_file(s, 1);
            ++reached;
            const bool occupied = p_.at(s).has_value();
            try_target(from, s);
            if (occupied) break;
        }
        s = from;
        for (int k = 0; k < kFiles - 1 - reached; ++k) {
            s = step_file(s, -1);
            const bool occupied = p_.at(s).has_value();
            try_target(from, s);
            if (occupied) break;
        }
    }

    void diagonal(Square from) {
        for (const auto& ray : kTables.diag[from]) slide(from, ray);
    }

    void pawn_to(Square from, Square to, const Piece& pawn, Move base) {
        base.from = from;
        base.to = to;
        const bool promotes =
            !byz_ && p_.rules().promotion && file_of(to) == pawn_promotion_file(pawn.color, pawn.dir);
        if (!promotes) {
            emit(base);
            return;
        }
        for (PieceKind k : {PieceKind::Queen, PieceKind::Rook, PieceKind::Bishop, PieceKind::Knight}) {
            base.promotion = k;
            emit(base);
        }
    }

    void pawn(Square from, const Piece& pc) {
        const int d = delta_of(pc.dir);
        const int r = ring_of(from);
        const Square fwd = step_file(from, d);
        if (!p_.at(fwd)) {
            pawn_to(from, fwd, pc, {});
            const Square fwd2 = step_file(fwd, d);
            if (!byz_ && p_.rules().double_step && file_of(from) == pawn_start_file(pc.color, pc.dir) &&
                !p_.at(fwd2))
                pawn_to(from, fwd2, pc, Move{.is_double_step = true});
        }
        for (int dr : {1, -1}) {
            if (!ring_ok(r + dr)) continue;
            const Square to = make_square(r + dr, file_of(from) + d);
            if (const auto target = p_.at(to)) {
                if (target->color != us_) pawn_to(from, to, pc, Move{.captured = target});
            } else if (!byz_ && p_.rules().en_passant && p_.ep_target() == to) {
                // The victim travels opposite to the capturer and sits one step past the skipped square.
                const Square victim = step_file(to, -d);
                const auto v = p_.at(victim);
                if (v && *v == Piece::pawn(~us_, reverse(pc.dir)))
                    pawn_to(from, to, pc, Move{.captured = v, .is_en_passant = true});
            }
        }
    }

    const Position& p_;
    Color us_;
    MoveList& out_;
    bool tactical_only_;
    bool byz_;
    std::array<std::pair<Square, Square>, 4> pairs_{};
    std::size_t pair_count_ = 0;
};

}  // namespace

void generate_pseudo_legal(const Position& p, MoveList& out) {
    out.clear();
    Generator(p, p.side_to_move(), out, false).run();
}

void generate_tactical(const Position& p, MoveList& out) {
    out.clear();
    Generator(p, p.side_to_move(), out, true).run();
}

namespace {

void filter_legal(Position& scratch, MoveList& moves) {
    const Color us = scratch.side_to_move();
    std::size_t kept = 0;
    for (std::size_t i = 0; i < moves.size(); ++i) {
        const auto raw = MoveAccess::make(scratch, moves[i]);
        const bool ok = !in_check(scratch, us);
        MoveAccess::unmake(scratch, moves[i], raw);
        if (ok) moves[kept++] = moves[i];
    }
    moves.truncate(kept);
}

}  // namespace

void generate_legal(const Position& p, MoveList& out) {
    Position scratch = p;
    generate_legal(scratch, out);
}

void generate_legal(Position& p, MoveList& out) {
    generate_pseudo_legal(p, out);
    filter_legal(p, out);
}

MoveList pseudo_legal_moves(const Position& p) {
    MoveList l;
    generate_pseudo_legal(p, l);
    return l;
}

MoveList legal_moves(const Position& p) {
    MoveList l;
    Position scratch = p;
    generate_legal(scratch, l);
    return l;
}

int mobility(const Position& p, Color c) noexcept {
    MoveList l;
    Generator(p, c, l, false).run();
    return static_cast<int>(l.size());
}

int facing_pawn_pairs(const Position& p, Color c) noexcept {
    int n = 0;
    std::uint64_t mask = p.pawn_mask(c);
    while (mask) {
        const auto sq = static_cast<Square>(std::countr_zero(mask));
        mask &= mask - 1;
        if (p.at(sq)->dir == PawnDir::Clockwise &&
            p.at(step_file(sq, 1)) == Piece::pawn(c, PawnDir::Counterclockwise))
            ++n;
    }
    return n;
}

// ── Application ─────────────────────────────────────────────────────────────
UndoToken make_move(Position& p, const Move& m) {
    UndoToken t;
    t.move = m;
    const auto raw = MoveAccess::make(p, m);
    MoveAccess::push_history(p);
    t.moved = raw.moved;
    t.prev_ep = raw.prev_ep;
    t.prev_no_capture_clock = raw.prev_clock;
    t.prev_fullmove = raw.prev_fullmove;
    t.prev_hash = raw.prev_hash;
    t.hash_after = p.hash();
    t.history_size_after = p.history().size();
    return t;
}

UndoToken apply_move(Position& p, const Move& m) {
    const auto mover = p.at(m.from);
    if (!mover) throw IllegalMoveError("illegal-move: no piece on " + square_name(m.from));
    if (mover->color != p.side_to_move())
        throw IllegalMoveError("illegal-move: wrong turn for piece on " + square_name(m.from));
    const MoveList legal = legal_moves(p);
    for (const Move& g : legal) {
        if (!g.same_action(m)) continue;
        if (!(g == m)) throw IllegalMoveError("illegal-move: malformed side effects for " + move_to_text(m));
        return make_move(p, g);
    }
    for (const Move& g : pseudo_legal_moves(p))
        if (g.same_action(m)) throw IllegalMoveError("illegal-move: " + move_to_text(m) + " leaves king in check");
    throw IllegalMoveError("illegal-move: " + move_to_text(m));
}

void undo_move(Position& p, const UndoToken& t) {
    if (p.history().size() != t.history_size_after || p.hash() != t.hash_after)
        throw StaleUndoError("undo token does not match the most recent move");
    MoveAccess::pop_history(p);
    MoveAccess::unmake(p, t.move,
                       {t.moved, t.prev_ep, t.prev_no_capture_clock, t.prev_fullmove, t.prev_hash});
}

std::uint64_t perft(Position& p, int depth) {
    if (depth <= 0) return 1;
    MoveList moves;
    generate_legal(p, moves);
    if (depth == 1) return moves.size();
    std::uint64_t nodes = 0;
    for (const Move& m : moves) {
        const auto raw = MoveAccess::make(p, m);
        nodes += perft(p, depth - 1);
        MoveAccess::unmake(p, m, raw);
    }
    return nodes;
}

// ── Text ────────────────────────────────────────────────────────────────────
std::string move_to_text(const Move& m) {
    std::string s = square_name(m.from) + square_name(m.to);
    if (m.promotion) {
        s += '=';
        s += piece_letter(Piece::make(Color::White, *m.promotion));
    }
    return s;
}

Move parse_move(const Position& p, std::string_view text) {
    if (text.size() != 4 && text.size() != 6) throw ParseError("malformed move '" + std::string(text) + "'");
    Move want;
    want.from = parse_coord(text.substr(0, 2)).square();
    want.to = parse_coord(text.substr(2, 2)).square();
    if (text.size() == 6) {
        if (text[4] != '=') throw ParseError("malformed promotion in '" + std::string(text) + "'");
        const auto pc = piece_from_letter(text[5]);
        if (!pc || pc->kind == PieceKind::King || pc->kind == PieceKind::Pawn || pc->color != Color::White)
            throw ParseError("bad promotion piece in '" + std::string(text) + "'");
        want.promotion = pc->kind;
    }
    for (const Move& m : legal_moves(p))
        if (m.same_action(want)) return m;
    throw IllegalMoveError("illegal-move " + std::string(text));
}

}  // namespace zatrikion
