#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>

#include "naive_rules.hpp"
#include "zatrikion/cfen.hpp"
#include "zatrikion/movegen.hpp"

using namespace zatrikion;

namespace {

Square sq(int ring, int file) { return make_square(ring, file); }

Position kings_only(Variant v, Square wk, Square bk, RuleConfig rules) {
    Position p(v, rules);
    p.put(wk, Piece::make(Color::White, PieceKind::King));
    p.put(bk, Piece::make(Color::Black, PieceKind::King));
    p.reset_history();
    return p;
}

Position kings_only(Variant v, Square wk, Square bk) { return kings_only(v, wk, bk, RuleConfig::defaults(v)); }

std::set<Square> targets_from(const MoveList& moves, Square from) {
    std::set<Square> out;
    for (const Move& m : moves)
        if (m.from == from) out.insert(m.to);
    return out;
}

std::set<std::string> texts(const MoveList& moves) {
    std::set<std::string> out;
    for (const Move& m : moves) out.insert(move_to_text(m));
    return out;
}

struct Xorshift {
    std::uint64_t s;
    std::uint64_t operator()() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
};

}  // namespace

TEST_CASE("knight wraps around the seam") {
    Position p = kings_only(Variant::ByzantineRegular, sq(4, 8), sq(1, 7));
    p.put(sq(1, 15), Piece::make(Color::White, PieceKind::Knight));
    const auto t = targets_from(pseudo_legal_moves(p), sq(1, 15));
    const std::set<Square> expected{sq(2, 1), sq(2, 13), sq(3, 0), sq(3, 14)};
    CHECK(t == expected);
}

TEST_CASE("lone rook: 15 ring squares plus 3 radial") {
    for (Variant v : {Variant::ByzantineRegular, Variant::CircularFIDE}) {
        Position p = kings_only(v, sq(4, 8), sq(3, 6));
        p.put(sq(2, 0), Piece::make(Color::White, PieceKind::Rook));
        const MoveList moves = pseudo_legal_moves(p);
        CHECK(targets_from(moves, sq(2, 0)).size() == 18);
        CHECK(std::count_if(moves.begin(), moves.end(), [](const Move& m) { return m.from == sq(2, 0); }) == 18);
        CHECK_FALSE(targets_from(moves, sq(2, 0)).contains(sq(2, 0)));
    }
}

TEST_CASE("rook capturing the only other piece on its ring is generated once") {
    Position p = kings_only(Variant::ByzantineRegular, sq(4, 9), sq(1, 12));
    p.put(sq(2, 0), Piece::make(Color::White, PieceKind::Rook));
    p.put(sq(2, 8), Piece::make(Color::Black, PieceKind::Knight));
    const MoveList moves = pseudo_legal_moves(p);
    CHECK(std::count_if(moves.begin(), moves.end(), [](const Move& m) { return m.to == sq(2, 8); }) == 1);
    // 7 + 7 ring squares, the capture, 3 radial
    CHECK(targets_from(moves, sq(2, 0)).size() == 18);
}

TEST_CASE("alfil leaps over occupied squares") {
    Position p = kings_only(Variant::ByzantineRegular, sq(1, 8), sq(1, 14));
    p.put(sq(2, 3), Piece::make(Color::White, PieceKind::Bishop));
    CHECK(targets_from(pseudo_legal_moves(p), sq(2, 3)) == std::set<Square>{sq(4, 1), sq(4, 5)});
    p.put(sq(3, 2), Piece::make(Color::Black, PieceKind::Rook));
    p.put(sq(3, 4), Piece::make(Color::White, PieceKind::Knight));
    CHECK(targets_from(pseudo_legal_moves(p), sq(2, 3)) == std::set<Square>{sq(4, 1), sq(4, 5)});
    CHECK(is_attacked(p, sq(4, 5), Color::White));
}

TEST_CASE("fers on the inner ring attacks exactly two squares") {
    Position p = kings_only(Variant::ByzantineRegular, sq(4, 12), sq(4, 0));
    p.put(sq(1, 5), Piece::make(Color::White, PieceKind::Queen));
    std::set<Square> attacked;
    Position probe = p;
    probe.remove(sq(4, 12));  // only the fers attacks now
    for (Square s = 0; s < kSquares; ++s)
        if (is_attacked(probe, s, Color::White)) attacked.insert(s);
    CHECK(attacked == std::set<Square>{sq(2, 4), sq(2, 6)});
}

TEST_CASE("rook attacks along the wrapped ring") {
    Position p = kings_only(Variant::ByzantineRegular, sq(1, 0), sq(1, 8));
    p.put(sq(3, 2), Piece::make(Color::White, PieceKind::Rook));
    p.put(sq(3, 0), Piece::make(Color::Black, PieceKind::Knight));  // blocks the short way round
    CHECK(is_attacked(p, sq(3, 14), Color::White));
    p.put(sq(3, 9), Piece::make(Color::Black, PieceKind::Knight));
    CHECK_FALSE(is_attacked(p, sq(3, 14), Color::White));
}

TEST_CASE("circular bishop slides diagonally across the seam") {
    Position p = kings_only(Variant::CircularFIDE, sq(4, 8), sq(4, 12));
    p.put(sq(1, 15), Piece::make(Color::White, PieceKind::Bishop));
    const std::set<Square> expected{sq(2, 0), sq(3, 1), sq(4, 2), sq(2, 14), sq(3, 13), sq(4, 12)};
    CHECK(targets_from(pseudo_legal_moves(p), sq(1, 15)) == expected);
}

TEST_CASE("start positions: 14, 14 and 20 legal moves") {
    CHECK(legal_moves(initial_position(Variant::ByzantineRegular)).size() == 14);
    CHECK(legal_moves(initial_position(Variant::ByzantineSymmetric)).size() == 14);
    const MoveList circ = legal_moves(initial_position(Variant::CircularFIDE));
    CHECK(circ.size() == 20);
    CHECK(std::count_if(circ.begin(), circ.end(), [](const Move& m) { return m.is_double_step; }) == 8);
}

TEST_CASE("white pawn c1 has exactly one move at the start") {
    const MoveList moves = legal_moves(initial_position(Variant::ByzantineRegular));
    CHECK(targets_from(moves, sq(1, 2)) == std::set<Square>{sq(1, 1)});
}

TEST_CASE("perft matches the frozen oracle values") {
    // frozen from tests/oracle (independent naive generator)
    Position reg = initial_position(Variant::ByzantineRegular);
    Position sym = initial_position(Variant::ByzantineSymmetric);
    Position circ = initial_position(Variant::CircularFIDE);
    CHECK(perft(reg, 0) == 1);
    CHECK(perft(reg, 1) == 14);
    CHECK(perft(reg, 2) == 196);
    CHECK(perft(reg, 3) == 2912);
    CHECK(perft(sym, 1) == 14);
    CHECK(perft(sym, 2) == 196);
    CHECK(perft(sym, 3) == 2912);
    CHECK(perft(circ, 1) == 20);
    CHECK(perft(circ, 2) == 400);
    CHECK(perft(circ, 3) == 8584);
}

TEST_CASE("facing own pawns annihilate without costing a turn") {
    Position p = kings_only(Variant::ByzantineRegular, sq(4, 0), sq(4, 12));
    p.put(sq(2, 7), Piece::pawn(Color::White, PawnDir::Clockwise));
    p.put(sq(2, 9), Piece::pawn(Color::White, PawnDir::Counterclockwise));
    p.set_no_capture_clock(5);
    p.reset_history();
    const Move m = parse_move(p, "j2i2");
    REQUIRE(m.annihilated_count == 2);
    CHECK(m.annihilations()[0].square == sq(2, 8));
    CHECK(m.annihilations()[1].square == sq(2, 7));
    for (const auto& r : m.annihilations()) CHECK(r.piece.color == Color::White);
    CHECK(m.annihilations()[0].piece.dir != m.annihilations()[1].piece.dir);

    const Position before = p;
    const UndoToken t = apply_move(p, m);
    CHECK_FALSE(p.at(sq(2, 7)));
    CHECK_FALSE(p.at(sq(2, 8)));
    CHECK(p.side_to_move() == Color::Black);
    CHECK(p.no_capture_clock() == 0);
    CHECK(p.piece_count(Color::White, PieceKind::Pawn) == 0);
    undo_move(p, t);
    CHECK(p == before);
    CHECK(p.at(sq(2, 7)) == Piece::pawn(Color::White, PawnDir::Clockwise));
    CHECK(p.at(sq(2, 9)) == Piece::pawn(Color::White, PawnDir::Counterclockwise));
}

TEST_CASE("with annihilation off the pawns block each other") {
    auto rules = RuleConfig::defaults(Variant::ByzantineRegular);
    rules.annihilation = false;
    Position p = kings_only(Variant::ByzantineRegular, sq(4, 0), sq(4, 12), rules);
    p.put(sq(2, 7), Piece::pawn(Color::White, PawnDir::Clockwise));
    p.put(sq(2, 9), Piece::pawn(Color::White, PawnDir::Counterclockwise));
    apply_move(p, parse_move(p, "j2i2"));
    CHECK(p.at(sq(2, 7)));
    CHECK(p.at(sq(2, 8)));
    make_move(p, parse_move(p, "m4l4"));
    const MoveList moves = legal_moves(p);
    CHECK(targets_from(moves, sq(2, 7)).empty());
    CHECK(targets_from(moves, sq(2, 8)).empty());
}

TEST_CASE("opposing pawns facing each other just block") {
    Position p = kings_only(Variant::ByzantineRegular, sq(4, 0), sq(4, 12));
    p.put(sq(2, 7), Piece::pawn(Color::White, PawnDir::Clockwise));
    p.put(sq(2, 9), Piece::pawn(Color::Black, PawnDir::Counterclockwise));
    const Move m = parse_move(p, "h2i2");
    CHECK(m.annihilated_count == 0);
    make_move(p, m);
    CHECK(targets_from(legal_moves(p), sq(2, 9)).empty());
}

TEST_CASE("a capture can complete an annihilating pair") {
    Position p = kings_only(Variant::ByzantineRegular, sq(4, 0), sq(4, 12));
    p.put(sq(1, 6), Piece::pawn(Color::White, PawnDir::Clockwise));
    p.put(sq(2, 8), Piece::pawn(Color::White, PawnDir::Counterclockwise));
    p.put(sq(2, 7), Piece::make(Color::Black, PieceKind::Knight));
    const Move m = parse_move(p, "g1h2");
    CHECK(m.is_capture());
    CHECK(m.annihilated_count == 2);
    const Position before = p;
    const auto t = apply_move(p, m);
    CHECK(p.piece_count(Color::White, PieceKind::Pawn) == 0);
    CHECK(p.non_king_count(Color::Black) == 0);
    undo_move(p, t);
    CHECK(p == before);
}

TEST_CASE("annihilation that exposes the king is illegal") {
    // The pair shields the white king on d2 from the rook on ring 2.
    Position p = kings_only(Variant::ByzantineRegular, sq(2, 3), sq(4, 12));
    p.put(sq(2, 5), Piece::pawn(Color::White, PawnDir::Clockwise));
    p.put(sq(2, 7), Piece::pawn(Color::White, PawnDir::Counterclockwise));
    p.put(sq(2, 9), Piece::make(Color::Black, PieceKind::Rook));
    CHECK(targets_from(legal_moves(p), sq(2, 7)).empty());
    CHECK_THROWS_WITH_AS(apply_move(p, Move{.from = sq(2, 7), .to = sq(2, 6)}), doctest::Contains("check"),
                         IllegalMoveError);
}

TEST_CASE("byzantine pawns never promote or double step") {
    Position p = kings_only(Variant::ByzantineRegular, sq(4, 0), sq(4, 8));
    p.put(sq(2, 9), Piece::pawn(Color::White, PawnDir::Clockwise));
    p.put(sq(3, 5), Piece::pawn(Color::White, PawnDir::Clockwise));
    for (const Move& m : legal_moves(p)) {
        CHECK_FALSE(m.promotion);
        CHECK_FALSE(m.is_double_step);
    }
}

TEST_CASE("circular pawns: double step, en passant and promotion") {
    Position p = parse_cfen("4K11/5P10/16/9s4k1 w - 0 1", Variant::CircularFIDE);
    // the white clockwise pawn on f2 may advance one or two squares
    CHECK(targets_from(legal_moves(p), sq(2, 5)) == std::set<Square>{sq(2, 6), sq(2, 7)});

    Position q = parse_cfen("4K11/16/8P7/10s4k w - 0 1", Variant::CircularFIDE);
    make_move(q, parse_move(q, "e1f1"));
    const Move dbl = parse_move(q, "k4i4");  // black counterclockwise pawn from its home file
    CHECK(dbl.is_double_step);
    make_move(q, dbl);
    CHECK(q.ep_target() == sq(4, 9));
    const Move ep = parse_move(q, "i3j4");
    CHECK(ep.is_en_passant);
    REQUIRE(ep.captured);
    CHECK(ep.captured->kind == PieceKind::Pawn);
    const Position before = q;
    const auto t = apply_move(q, ep);
    CHECK_FALSE(q.at(sq(4, 8)));
    CHECK(q.at(sq(4, 9)) == Piece::pawn(Color::White, PawnDir::Clockwise));
    CHECK(q.no_capture_clock() == 0);
    undo_move(q, t);
    CHECK(q == before);

    Position r = parse_cfen("K15/9P6/16/8k7 w - 0 1", Variant::CircularFIDE);
    const MoveList moves = legal_moves(r);
    CHECK(texts(moves) == std::set<std::string>{"j2k2=Q", "j2k2=R", "j2k2=B", "j2k2=N", "a1b1", "a1p1", "a1a2",
                                                "a1b2", "a1p2"});
    make_move(r, parse_move(r, "j2k2=N"));
    CHECK(r.at(sq(2, 10)) == Piece::make(Color::White, PieceKind::Knight));
}

TEST_CASE("ep target only after a double step") {
    Position p = initial_position(Variant::CircularFIDE);
    make_move(p, parse_move(p, "f1g1"));
    CHECK_FALSE(p.ep_target());
    make_move(p, parse_move(p, "k1i1"));
    CHECK(p.ep_target() == sq(1, 9));
    make_move(p, parse_move(p, "d3b2"));
    CHECK_FALSE(p.ep_target());
}

TEST_CASE("checked application rejects bad moves with a reason") {
    Position p = initial_position(Variant::ByzantineRegular);
    CHECK_THROWS_WITH_AS(apply_move(p, Move{.from = sq(1, 10), .to = sq(1, 9)}), doctest::Contains("wrong turn"),
                         IllegalMoveError);
    CHECK_THROWS_WITH_AS(apply_move(p, Move{.from = sq(1, 8), .to = sq(1, 9)}), doctest::Contains("no piece"),
                         IllegalMoveError);
    CHECK_THROWS_AS(apply_move(p, Move{.from = sq(1, 2), .to = sq(1, 0)}), IllegalMoveError);
    Move tampered = parse_move(p, "c1b1");
    tampered.captured = Piece::make(Color::Black, PieceKind::Rook);
    CHECK_THROWS_WITH_AS(apply_move(p, tampered), doctest::Contains("malformed"), IllegalMoveError);
    CHECK_THROWS_AS(parse_move(p, "c1"), ParseError);
    CHECK_THROWS_AS(parse_move(p, "c1a1"), IllegalMoveError);
    CHECK(p == initial_position(Variant::ByzantineRegular));
}

TEST_CASE("stale undo tokens are refused") {
    Position p = initial_position(Variant::ByzantineRegular);
    const auto t1 = apply_move(p, parse_move(p, "c1b1"));
    const auto t2 = apply_move(p, parse_move(p, "k1j1"));
    CHECK_THROWS_AS(undo_move(p, t1), StaleUndoError);
    undo_move(p, t2);
    undo_move(p, t1);
    CHECK(p == initial_position(Variant::ByzantineRegular));
    CHECK_THROWS_AS(undo_move(p, t1), StaleUndoError);
}

TEST_CASE("incremental hash equals recomputation across random play") {
    Xorshift rng{0xDEADBEEF};
    for (Variant v : {Variant::ByzantineRegular, Variant::CircularFIDE}) {
        Position p = initial_position(v);
        std::vector<UndoToken> stack;
        for (int step = 0; step < 20000; ++step) {
            const MoveList moves = legal_moves(p);
            const bool back = !stack.empty() && (moves.empty() || rng() % 3 == 0);
            if (back) {
                undo_move(p, stack.back());
                stack.pop_back();
            } else if (!moves.empty()) {
                stack.push_back(make_move(p, moves[rng() % moves.size()]));
            }
            REQUIRE(p.hash() == zobrist_hash(p));
            REQUIRE(p.history().back() == p.hash());
        }
    }
}

TEST_CASE("no legal move leaves the mover in check; pawns keep their direction") {
    Xorshift rng{42};
    for (Variant v : {Variant::ByzantineRegular, Variant::ByzantineSymmetric, Variant::CircularFIDE}) {
        for (int game = 0; game < 30; ++game) {
            Position p = initial_position(v);
            for (int ply = 0; ply < 150; ++ply) {
                const MoveList moves = legal_moves(p);
                if (moves.empty()) break;
                for (const Move& m : moves) {
                    Position q = p;
                    make_move(q, m);
                    REQUIRE_FALSE(in_check(q, p.side_to_move()));
                    const Piece mover = *p.at(m.from);
                    if (mover.is_pawn() && !m.promotion) {
                        const int df = wrap_file(file_of(m.to) - file_of(m.from));
                        const int step = m.is_double_step ? 2 : 1;
                        CHECK(df == wrap_file(step * delta_of(mover.dir)));
                    }
                    for (const auto& r : m.annihilations()) {
                        CHECK(r.piece.is_pawn());
                        CHECK(r.piece.color == p.side_to_move());
                    }
                    CHECK((m.annihilated_count == 0 || m.annihilated_count == 2));
                    if (is_byzantine(v)) CHECK_FALSE(m.promotion);
                }
                make_move(p, moves[rng() % moves.size()]);
            }
        }
    }
}

TEST_CASE("mirroring maps the legal move set onto itself") {
    Xorshift rng{7};
    for (Variant v : {Variant::ByzantineRegular, Variant::ByzantineSymmetric, Variant::CircularFIDE}) {
        for (int game = 0; game < 20; ++game) {
            Position p = initial_position(v);
            for (int ply = 0; ply < 80; ++ply) {
                const MoveList moves = legal_moves(p);
                if (moves.empty()) break;
                const Position m = mirror(p);
                const MoveList mm = legal_moves(m);
                REQUIRE(mm.size() == moves.size());
                std::set<std::pair<int, int>> reflected;
                for (const Move& x : moves)
                    reflected.insert({make_square(ring_of(x.from), 15 - file_of(x.from)),
                                      make_square(ring_of(x.to), 15 - file_of(x.to))});
                std::set<std::pair<int, int>> direct;
                for (const Move& x : mm) direct.insert({x.from, x.to});
                CHECK(reflected == direct);
                make_move(p, moves[rng() % moves.size()]);
            }
        }
    }
}

TEST_CASE("legal moves agree with the naive oracle on random positions") {
    Xorshift rng{2024};
    for (Variant v : {Variant::ByzantineRegular, Variant::ByzantineSymmetric, Variant::CircularFIDE}) {
        for (int game = 0; game < 30; ++game) {
            Position p = initial_position(v);
            for (int ply = 0; ply < 100; ++ply) {
                const MoveList moves = legal_moves(p);
                const auto board = naive::from_cfen(format_cfen(p), {is_byzantine(v), true});
                const auto oracle = naive::legal_moves(board);
                REQUIRE(texts(moves) == std::set<std::string>(oracle.begin(), oracle.end()));
                if (moves.empty()) break;
                const Move m = moves[rng() % moves.size()];
                make_move(p, m);
                REQUIRE(format_cfen(p) == naive::to_cfen(naive::play(board, move_to_text(m))));
            }
        }
    }
}
