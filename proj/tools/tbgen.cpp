#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "zatrikion/endgame.hpp"

using namespace zatrikion;

int main(int argc, char** argv) {
    CLI::App app{"Solve a pawnless endgame by retrograde analysis"};
    std::string material;
    std::string out;
    bool verify = false;
    app.add_option("material", material, "e.g. KN-KB")->required();
    app.add_option("--out", out, "write the table to this file");
    app.add_flag("--verify", verify, "re-derive every value by forward search");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto t0 = std::chrono::steady_clock::now();
        const EndgameTable table = EndgameTable::solve(Material::parse(material));
        const double solve_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const TableStats st = table.stats();
        std::printf("material      %s\n", table.material().to_string().c_str());
        std::printf("legal_states  %llu\n", static_cast<unsigned long long>(st.legal_states));
        std::printf("white_wins    %llu\n", static_cast<unsigned long long>(st.white_wins));
        std::printf("black_wins    %llu\n", static_cast<unsigned long long>(st.black_wins));
        std::printf("draws         %llu\n", static_cast<unsigned long long>(st.draws));
        std::printf("draw_fraction %.4f\n", st.draw_fraction());
        std::printf("longest_win   %d plies\n", st.longest_win);
        std::printf("solve_seconds %.1f\n", solve_s);
        if (verify) {
            const ConsistencyReport r = table.verify();
            std::printf("verified      %llu states, %llu violations\n", static_cast<unsigned long long>(r.checked),
                        static_cast<unsigned long long>(r.violations));
            if (!r.ok()) std::printf("first         %s\n", r.first_violation.c_str());
            if (!r.ok()) return 3;
        }
        if (!out.empty()) table.save(out);
    } catch (const std::exception& e) {
        std::cerr << "tbgen: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
