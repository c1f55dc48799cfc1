// Prints the first S^1 contact-homology descendants and SFT Hamiltonians.
#include <iostream>

#include "pnrec/models/s1.hpp"
#include "pnrec/recursion/sft.hpp"

int main() {
    using namespace pnrec;

    auto ch = build_s1_ch_model(5);
    PrimaryFields prim{{0, ch.primaries.at("1")}};
    auto tower = ch_tower(*ch.endomorphism, prim, *ch.ring, 0, 3);
    for (int n = 0; n <= 3; ++n) {
        std::cout << "X_1," << n << ":\n";
        for (int l = 1; l <= 5; ++l)
            std::cout << "  " << s1::q_name(l) << ": " << tower.levels[n].component(s1::q_name(l)).to_string() << "\n";
    }

    auto sft = build_s1_sft_model(6);
    auto ctx = std::make_shared<const SftContext>(*sft.poisson, *sft.bivector);
    auto hs = sft_tower(ctx, Polynomial::variable(sft.table, "t1"), 2,
                        [&](int n) { return std::optional(s1::constant_curve_term(sft.table, n)); });
    for (int n = 0; n <= 2; ++n) {
        auto h = hs[n + 1].hamiltonian().filter([&](const Monomial& m) {
            for (auto [v, e] : m.factors())
                if (auto k = (*sft.table)[v].orbit_index; k && *k > 2) return false;
            return true;
        });
        std::cout << "h_1," << n << " (|k| <= 2): " << h.to_string() << "\n";
    }
}
