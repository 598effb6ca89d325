// Prints oracle perft counts for the start positions; used to freeze expected values.
#include <cstdio>
#include <string>

#include "naive_rules.hpp"

int main() {
    const std::string regular = "2SQKP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - 0 1";
    const std::string symmetric = "2SKQP4skqp2/2SBBP4sbbp2/2SNNP4snnp2/2SRRP4srrp2 w - 0 1";
    struct Case {
        const char* name;
        std::string fen;
        bool byz;
    };
    for (const Case& c : {Case{"regular", regular, true}, Case{"symmetric", symmetric, true},
                          Case{"circular", regular, false}}) {
        const auto b = naive::from_cfen(c.fen, {c.byz, true});
        for (int d = 1; d <= 4; ++d)
            std::printf("%s perft(%d) = %llu\n", c.name, d, static_cast<unsigned long long>(naive::perft(b, d)));
    }
}
