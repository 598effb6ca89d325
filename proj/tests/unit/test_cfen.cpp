#include "doctest.h"

#include "zatrikion/cfen.hpp"
#include "zatrikion/movegen.hpp"

using namespace zatrikion;

TEST_CASE("start positions encode as the diagrams") {
    CHECK(format_cfen(initial_position(Variant::ByzantineRegular)) ==
          "2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - 0 1");
    CHECK(format_cfen(initial_position(Variant::ByzantineSymmetric)) ==
          "2SKQP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - 0 1");
    CHECK(format_cfen(initial_position(Variant::CircularFIDE)) ==
          "2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - 0 1");
}

TEST_CASE("parse inverts format for the start positions") {
    for (Variant v : {Variant::ByzantineRegular, Variant::ByzantineSymmetric, Variant::CircularFIDE}) {
        const Position p = initial_position(v);
        CHECK(parse_cfen(format_cfen(p), v) == p);
    }
}

TEST_CASE("empty rings and multi-digit gaps") {
    const auto p = parse_cfen("K15/16/16/8k7 b - 12 40", Variant::ByzantineRegular);
    CHECK(p.at(Coord{1, 0}) == Piece::make(Color::White, PieceKind::King));
    CHECK(p.at(Coord{4, 8}) == Piece::make(Color::Black, PieceKind::King));
    CHECK(p.side_to_move() == Color::Black);
    CHECK(p.no_capture_clock() == 12);
    CHECK(p.fullmove() == 40);
    CHECK(format_cfen(p) == "K15/16/16/8k7 b - 12 40");
}

TEST_CASE("en passant square survives the round trip") {
    const std::string text = "2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2S1RRP3srrp2 b f4 0 1";
    const auto p = parse_cfen(text, Variant::CircularFIDE);
    CHECK(p.ep_target() == make_square(4, 5));
    CHECK(format_cfen(p) == text);
}

TEST_CASE("malformed cFEN reports where it broke") {
    // ring 1 holds 15 squares
    CHECK_THROWS_WITH_AS(parse_cfen("2SQKP4skqp1/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - 0 1", Variant::ByzantineRegular),
                         doctest::Contains("ring 1"), ParseError);
    CHECK_THROWS_WITH_AS(parse_cfen("2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp3 w - 0 1", Variant::ByzantineRegular),
                         doctest::Contains("ring 4"), ParseError);
    CHECK_THROWS_WITH_AS(parse_cfen("2SQKX4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - 0 1", Variant::ByzantineRegular),
                         doctest::Contains("index 4"), ParseError);
    CHECK_THROWS_WITH_AS(parse_cfen("2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - 0", Variant::ByzantineRegular),
                         doctest::Contains("5 fields"), ParseError);
    CHECK_THROWS_AS(parse_cfen("2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2 w - 0 1", Variant::ByzantineRegular), ParseError);
    CHECK_THROWS_AS(parse_cfen("2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 x - 0 1", Variant::ByzantineRegular),
                    ParseError);
    CHECK_THROWS_AS(parse_cfen("2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w z9 0 1", Variant::ByzantineRegular),
                    ParseError);
    CHECK_THROWS_AS(parse_cfen("2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - -3 1", Variant::ByzantineRegular),
                    ParseError);
}

TEST_CASE("cFEN round trip over random playouts") {
    std::uint64_t rng = 0x1234567;
    auto next = [&rng] {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        return rng;
    };
    for (Variant v : {Variant::ByzantineRegular, Variant::ByzantineSymmetric, Variant::CircularFIDE}) {
        for (int game = 0; game < 40; ++game) {
            Position p = initial_position(v);
            for (int ply = 0; ply < 120; ++ply) {
                const MoveList moves = legal_moves(p);
                if (moves.empty()) break;
                make_move(p, moves[next() % moves.size()]);
                const std::string text = format_cfen(p);
                const Position back = parse_cfen(text, v);
                REQUIRE(format_cfen(back) == text);
                REQUIRE(back.hash() == p.hash());
            }
        }
    }
}
