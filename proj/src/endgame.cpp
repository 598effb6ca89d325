#include "zatrikion/endgame.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "zatrikion/cfen.hpp"
#include "zatrikion/movegen.hpp"

namespace zatrikion {

namespace {

constexpr std::string_view kMagic = "ZATRIKION-EGTB";
constexpr int kVersion = 1;
constexpr std::string_view kIndexDoc =
    "((((wk_ring-1)*64+s1)*64+s2)*64+s3)*2+stm; white king rotated to file 0; "
    "s1.. = black king, white pieces, black pieces in material order; stm 0 = white";
constexpr std::string_view kValueDoc = "0=draw 1..127=win in (v-1) plies 128..254=loss in (v-128) plies 255=illegal";

constexpr std::array<PieceKind, 4> kLetterOrder{PieceKind::Queen, PieceKind::Rook, PieceKind::Bishop,
                                                PieceKind::Knight};

int letter_rank(PieceKind k) {
    return static_cast<int>(std::find(kLetterOrder.begin(), kLetterOrder.end(), k) - kLetterOrder.begin());
}

void sort_pieces(std::vector<PieceKind>& v) {
    std::sort(v.begin(), v.end(), [](PieceKind a, PieceKind b) { return letter_rank(a) < letter_rank(b); });
}

Square rotate(Square s, int by) { return make_square(ring_of(s), file_of(s) + by); }

}  // namespace

// ── Material ────────────────────────────────────────────────────────────────
Material Material::parse(std::string_view text) {
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) throw OracleError("material '" + std::string(text) + "' needs a '-'");
    Material m;
    auto side = [&](std::string_view part, std::vector<PieceKind>& out) {
        if (part.empty() || part.front() != 'K')
            throw OracleError("material side '" + std::string(part) + "' must start with K");
        for (char c : part.substr(1)) {
            const auto pc = piece_from_letter(c);
            if (!pc || pc->kind == PieceKind::King)
                throw OracleError(std::string("bad material letter '") + c + "'");
            out.push_back(pc->kind);
        }
        sort_pieces(out);
    };
    side(text.substr(0, dash), m.white);
    side(text.substr(dash + 1), m.black);
    return m;
}

Material Material::of(const Position& p) {
    Material m;
    for (Square s = 0; s < kSquares; ++s) {
        const auto pc = p.at(s);
        if (!pc || pc->kind == PieceKind::King) continue;
        (pc->color == Color::White ? m.white : m.black).push_back(pc->kind);
    }
    sort_pieces(m.white);
    sort_pieces(m.black);
    return m;
}

std::string Material::to_string() const {
    std::string out = "K";
    for (PieceKind k : white) out += piece_letter(Piece::make(Color::White, k));
    out += "-K";
    for (PieceKind k : black) out += piece_letter(Piece::make(Color::White, k));
    return out;
}

// ── Values ──────────────────────────────────────────────────────────────────
std::uint8_t OracleValue::to_byte() const {
    if (plies_ < 0 || plies_ > kMaxOraclePlies) throw OracleError("distance " + std::to_string(plies_) + " out of range");
    switch (outcome_) {
        case Outcome::Draw: return 0;
        case Outcome::Win: return static_cast<std::uint8_t>(1 + plies_);
        case Outcome::Loss: return static_cast<std::uint8_t>(128 + plies_);
    }
    return 0;
}

OracleValue OracleValue::from_byte(std::uint8_t b) {
    if (b == 0) return draw();
    if (b < 128) return win(b - 1);
    if (b < kIllegalState) return loss(b - 128);
    throw OracleError("illegal state has no value");
}

std::string OracleValue::to_string() const {
    switch (outcome_) {
        case Outcome::Draw: return "draw";
        case Outcome::Win: return "win " + std::to_string(plies_);
        case Outcome::Loss: return "loss " + std::to_string(plies_);
    }
    return "?";
}

std::optional<OracleValue> terminal_value(const GameStatus& status, Color side_to_move) {
    if (!status.is_terminal()) return std::nullopt;
    if (status.is_draw()) return OracleValue::draw();
    return *status.winner() == side_to_move ? OracleValue::win(0) : OracleValue::loss(0);
}

// ── Indexing ────────────────────────────────────────────────────────────────
EndgameTable::EndgameTable(Material m, Variant v) : material_(std::move(m)), variant_(v) {}

std::vector<Piece> EndgameTable::piece_order() const {
    std::vector<Piece> order{Piece::make(Color::White, PieceKind::King), Piece::make(Color::Black, PieceKind::King)};
    for (PieceKind k : material_.white) order.push_back(Piece::make(Color::White, k));
    for (PieceKind k : material_.black) order.push_back(Piece::make(Color::Black, k));
    return order;
}

namespace {

// Index without validation; the caller guarantees the material matches.
std::size_t encode(const Position& p, const std::vector<Piece>& order) {
    std::array<int, 4> at{-1, -1, -1, -1};
    const int n = static_cast<int>(order.size());
    for (Square s = 0; s < kSquares; ++s) {
        const auto pc = p.at(s);
        if (!pc) continue;
        for (int j = 0; j < n; ++j)
            if (at[j] < 0 && order[j] == *pc) {
                at[j] = s;
                break;
            }
    }
    const int shift = -file_of(static_cast<Square>(at[0]));
    std::size_t index = static_cast<std::size_t>(ring_of(static_cast<Square>(at[0])) - 1);
    for (int j = 1; j < n; ++j) index = index * kSquares + rotate(static_cast<Square>(at[j]), shift);
    return index * 2 + (p.side_to_move() == Color::White ? 0 : 1);
}

}  // namespace

std::size_t EndgameTable::index_of(const Position& p) const {
    if (Material::of(p) != material_ || !p.king_square(Color::White) || !p.king_square(Color::Black))
        throw OracleError("position " + format_cfen(p) + " is not " + material_.to_string());
    return encode(p, piece_order());
}

std::optional<Position> EndgameTable::position_at(std::size_t index) const {
    if (index >= values_.size()) throw OracleError("index out of range");
    const auto order = piece_order();
    const int n = static_cast<int>(order.size());
    Position p(variant_, RuleConfig::defaults(variant_));
    p.set_side_to_move((index & 1) ? Color::Black : Color::White);
    std::size_t rest = index >> 1;
    std::array<Square, 4> at{};
    for (int j = n - 1; j >= 1; --j) {
        at[j] = static_cast<Square>(rest % kSquares);
        rest /= kSquares;
    }
    at[0] = make_square(static_cast<int>(rest) + 1, 0);
    for (int j = 0; j < n; ++j) {
        if (!p.empty(at[j])) return std::nullopt;
        p.put(at[j], order[j]);
    }
    p.reset_history();
    return p;
}

// ── Solving ─────────────────────────────────────────────────────────────────
namespace {

bool legal_state(const Position& p) { return !in_check(p, ~p.side_to_move()); }

OracleValue capture_outcome(Position& p, const Move& m) {
    const UndoToken t = make_move(p, m);
    const auto v = terminal_value(game_status(p), p.side_to_move());
    if (!v) {
        const std::string fen = format_cfen(p);
        undo_move(p, t);
        throw OracleError("capture reaches non-terminal " + fen + "; material needs a sub-table");
    }
    undo_move(p, t);
    return *v;
}

}  // namespace

EndgameTable EndgameTable::solve(const Material& material, Variant v) {
    if (v != Variant::ByzantineRegular) throw OracleError("endgame tables exist for byzantine-regular only");
    for (const auto* side : {&material.white, &material.black})
        for (PieceKind k : *side)
            if (k == PieceKind::Pawn) throw OracleError("pawn endings are unsupported");
    if (material.piece_count() > 4) throw OracleError("at most four pieces are supported");

    EndgameTable table(material, v);
    Material canon = material;
    sort_pieces(canon.white);
    sort_pieces(canon.black);
    table.material_ = canon;

    std::size_t size = 4 * 2;
    for (int i = 1; i < canon.piece_count(); ++i) size *= kSquares;
    table.values_.assign(size, kIllegalState);
    const auto order = table.piece_order();

    std::vector<std::uint8_t> open_moves(size, 0);
    std::vector<bool> resolved(size, false);
    std::vector<std::vector<std::uint32_t>> levels(2);
    auto settle = [&](std::size_t i, OracleValue value) {
        table.values_[i] = value.to_byte();
        resolved[i] = true;
        if (value.is_draw()) return;
        if (levels.size() <= static_cast<std::size_t>(value.plies())) levels.resize(value.plies() + 1);
        levels[value.plies()].push_back(static_cast<std::uint32_t>(i));
    };

    MoveList legal;
    for (std::size_t i = 0; i < size; ++i) {
        auto pos = table.position_at(i);
        if (!pos || !legal_state(*pos)) continue;
        Position& p = *pos;
        generate_legal(p, legal);
        const auto term = terminal_value(game_status(p, legal), p.side_to_move());
        if (term) {
            settle(i, *term);
            continue;
        }
        int open = 0;
        bool wins_now = false;
        for (const Move& m : legal) {
            if (!m.is_capture()) {
                ++open;
                continue;
            }
            const OracleValue after = capture_outcome(p, m);
            if (after.is_loss()) wins_now = true;
            if (after.is_draw()) ++open;  // never resolves, so a loss stays impossible
        }
        table.values_[i] = 0;
        if (wins_now)
            settle(i, OracleValue::win(1));
        else if (open == 0)
            settle(i, OracleValue::loss(1));
        else
            open_moves[i] = static_cast<std::uint8_t>(open);
    }

    // Backward induction, one distance level at a time.
    for (std::size_t level = 0; level < levels.size(); ++level) {
        for (std::size_t k = 0; k < levels[level].size(); ++k) {
            const std::size_t i = levels[level][k];
            const OracleValue value = OracleValue::from_byte(table.values_[i]);
            Position s = *table.position_at(i);
            const Color mover = ~s.side_to_move();
            Position q = s;
            q.set_side_to_move(mover);
            for (const Move& m : pseudo_legal_moves(q)) {
                if (m.is_capture()) continue;
                Position pred = q;
                const Piece piece = *pred.at(m.from);
                pred.remove(m.from);
                pred.put(m.to, piece);
                if (in_check(pred, ~mover)) continue;
                const std::size_t j = encode(pred, order);
                if (resolved[j]) continue;
                if (value.is_loss()) {
                    settle(j, OracleValue::win(static_cast<int>(level) + 1));
                } else if (--open_moves[j] == 0) {
                    settle(j, OracleValue::loss(static_cast<int>(level) + 1));
                }
            }
        }
    }
    return table;
}

OracleValue EndgameTable::probe(const Position& p) const {
    const std::uint8_t b = values_[index_of(p)];
    if (b == kIllegalState) throw OracleError("illegal state " + format_cfen(p));
    return OracleValue::from_byte(b);
}

TableStats EndgameTable::stats() const {
    TableStats st;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] == kIllegalState) continue;
        ++st.legal_states;
        const OracleValue v = OracleValue::from_byte(values_[i]);
        const bool white_to_move = (i & 1) == 0;
        if (v.is_draw())
            ++st.draws;
        else if (v.is_win() == white_to_move)
            ++st.white_wins;
        else
            ++st.black_wins;
        if (v.is_win()) st.longest_win = std::max(st.longest_win, v.plies());
    }
    return st;
}

ConsistencyReport EndgameTable::verify() const {
    ConsistencyReport report;
    const auto order = piece_order();
    MoveList legal;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        auto pos = position_at(i);
        const bool legal_here = pos && legal_state(*pos);
        if (!legal_here) {
            if (values_[i] != kIllegalState) {
                ++report.violations;
                if (report.first_violation.empty()) report.first_violation = "index " + std::to_string(i) + " should be illegal";
            }
            continue;
        }
        ++report.checked;
        Position& p = *pos;
        auto fail = [&](const std::string& why) {
            ++report.violations;
            if (report.first_violation.empty()) report.first_violation = format_cfen(p) + ": " + why;
        };
        if (values_[i] == kIllegalState) {
            fail("legal state marked illegal");
            continue;
        }
        const OracleValue v = OracleValue::from_byte(values_[i]);
        generate_legal(p, legal);
        const auto term = terminal_value(game_status(p, legal), p.side_to_move());
        if (term) {
            if (v != *term) fail("terminal value " + term->to_string() + " stored as " + v.to_string());
            continue;
        }

        int best_win = -1;         // fastest win over replies the opponent loses
        int slowest_loss = -1;     // longest opponent win
        bool any_draw = false;
        bool all_opponent_wins = true;
        for (const Move& m : legal) {
            OracleValue child = OracleValue::draw();
            if (m.is_capture()) {
                child = capture_outcome(p, m);
            } else {
                const UndoToken t = make_move(p, m);
                const std::uint8_t b = values_[encode(p, order)];
                undo_move(p, t);
                if (b == kIllegalState) {
                    fail("move leads to an illegal index");
                    continue;
                }
                child = OracleValue::from_byte(b);
            }
            if (child.is_loss()) {
                if (best_win < 0 || child.plies() + 1 < best_win) best_win = child.plies() + 1;
                all_opponent_wins = false;
            } else if (child.is_win()) {
                slowest_loss = std::max(slowest_loss, child.plies() + 1);
            } else {
                any_draw = true;
                all_opponent_wins = false;
            }
        }
        switch (v.outcome()) {
            case OracleValue::Outcome::Win:
                if (best_win != v.plies()) fail("stored " + v.to_string() + ", best reply gives win " + std::to_string(best_win));
                break;
            case OracleValue::Outcome::Loss:
                if (!all_opponent_wins || slowest_loss != v.plies())
                    fail("stored " + v.to_string() + ", replies give loss " + std::to_string(slowest_loss));
                break;
            case OracleValue::Outcome::Draw:
                if (best_win >= 0) fail("stored draw but a winning move exists");
                if (!any_draw) fail("stored draw without a drawing move");
                break;
        }
    }
    return report;
}

// ── Persistence ─────────────────────────────────────────────────────────────
void EndgameTable::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OracleError("cannot write " + path.string());
    out << kMagic << ' ' << kVersion << '\n'
        << "variant " << variant_name(variant_) << '\n'
        << "material " << material_.to_string() << '\n'
        << "states " << values_.size() << '\n'
        << "index " << kIndexDoc << '\n'
        << "values " << kValueDoc << '\n'
        << "end\n";
    out.write(reinterpret_cast<const char*>(values_.data()), static_cast<std::streamsize>(values_.size()));
    if (!out) throw OracleError("write failed for " + path.string());
}

EndgameTable EndgameTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OracleError("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != std::string(kMagic) + ' ' + std::to_string(kVersion))
        throw OracleError(path.string() + ": not a version " + std::to_string(kVersion) + " table");
    std::optional<Variant> variant;
    std::optional<Material> material;
    std::size_t states = 0;
    while (std::getline(in, line) && line != "end") {
        std::istringstream fields(line);
        std::string key, value;
        fields >> key >> value;
        if (key == "variant")
            variant = parse_variant(value);
        else if (key == "material")
            material = Material::parse(value);
        else if (key == "states")
            states = std::stoull(value);
    }
    if (line != "end" || !variant || !material) throw OracleError(path.string() + ": truncated header");
    EndgameTable table(*material, *variant);
    std::size_t expected = 8;
    for (int i = 1; i < material->piece_count(); ++i) expected *= kSquares;
    if (states != expected) throw OracleError(path.string() + ": state count does not match material");
    table.values_.resize(states);
    in.read(reinterpret_cast<char*>(table.values_.data()), static_cast<std::streamsize>(states));
    if (in.gcount() != static_cast<std::streamsize>(states)) throw OracleError(path.string() + ": truncated values");
    return table;
}

}  // namespace zatrikion
