#pragma once

#include <optional>
#include <vector>

#include "pnrec/poisson/linear_solve.hpp"
#include "pnrec/tensor/operations.hpp"

namespace pnrec {

/// {f,g}_B = sum B^{ab} d_a f d_b g for an explicit bivector over even coordinates.
inline Polynomial bivector_bracket(const Bivector& b, const Polynomial& f, const Polynomial& g) {
    Polynomial out(b.table());
    for (const auto& [key, bab] : b.entries()) {
        auto fa = f.derivative(key.first);
        if (fa.is_zero()) continue;
        auto gb = g.derivative(key.second);
        if (gb.is_zero()) continue;
        out += bab * fa * gb;
    }
    return out;
}

/// Hamiltonian field of c for an explicit bivector: (B dc)^a = sum_b B^{ab} d_b c.
inline VectorField bivector_field(const Bivector& b, const Polynomial& c) {
    return contract_bivector(b, OneForm::differential(c));
}

/// J^{abc} = {x_a,{x_b,x_c}} + {x_b,{x_c,x_a}} + {x_c,{x_a,x_b}} on coordinate triples.
inline PolyArray3 jacobiator(const Bivector& b, std::span<const std::size_t> coords) {
    if (b.symmetry() != Symmetry::antisymmetric) throw ValidationError("jacobiator needs an antisymmetric bivector");
    if (!b.symmetry_holds()) throw ValidationError("bivector entries are not antisymmetric");
    detail::require_even_coordinates(*b.table(), coords, "jacobiator");
    const auto& table = b.table();
    const std::size_t n = coords.size();
    PolyArray3 j;
    j.coords.assign(coords.begin(), coords.end());
    j.data.assign(n * n * n, Polynomial(table));
    // {x_a, F} = sum_i B^{a i} d_i F
    auto br = [&](std::size_t a, const Polynomial& f) {
        Polynomial out(table);
        for (const auto& [key, p] : b.entries()) {
            if (key.first != a) continue;
            auto d = f.derivative(key.second);
            if (!d.is_zero()) out += p * d;
        }
        return out;
    };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                auto a = coords[x], bb = coords[y], c = coords[z];
                j.at(x, y, z) = br(a, b.entry(bb, c)) + br(bb, b.entry(c, a)) + br(c, b.entry(a, bb));
            }
    return j;
}

inline PolyArray3 jacobiator(const Bivector& b) {
    auto coords = even_coordinates(*b.table());
    return jacobiator(b, coords);
}

/// Pair of compatible Poisson bivectors; the pencil is P2 - lambda P1.
class PoissonPencil {
public:
    PoissonPencil(Bivector p1, Bivector p2) : p1_(std::move(p1)), p2_(std::move(p2)) {
        require_same_table(p1_.table(), p2_.table());
        if (!jacobiator(p1_).is_zero()) throw ValidationError("P1 is not Poisson (jacobiator does not vanish)");
        if (!jacobiator(p2_).is_zero()) throw ValidationError("P2 is not Poisson (jacobiator does not vanish)");
        if (!jacobiator(p1_ + p2_).is_zero())
            throw ValidationError("P1 and P2 are not compatible (jacobiator of P1 + P2 does not vanish)");
    }

    const Bivector& first() const noexcept { return p1_; }
    const Bivector& second() const noexcept { return p2_; }
    const TablePtr& table() const noexcept { return p1_.table(); }

private:
    Bivector p1_, p2_;
};

struct CasimirTower {
    Polynomial seed;
    std::vector<Polynomial> coefficients;  // c_0, c_1, ...
    std::vector<std::size_t> kernel_dimensions;
    bool resonance = false;
};

enum class KernelPolicy {
    /// Prefer a solution that is a Casimir of P2 (tower terminates); zero remaining free coordinates.
    canonical,
    /// Throw AmbiguousSolution whenever the step leaves kernel freedom.
    strict
};

namespace detail {

inline void enumerate_monomials(std::span<const std::size_t> coords, int max_degree, std::size_t start,
                                std::vector<Monomial::Factor>& cur, int deg, std::vector<Monomial>& out) {
    if (deg > 0) out.push_back(Monomial::from_sorted(cur));
    if (deg == max_degree) return;
    for (std::size_t i = start; i < coords.size(); ++i) {
        auto v = static_cast<std::uint32_t>(coords[i]);
        if (!cur.empty() && cur.back().first == v) {
            ++cur.back().second;
            enumerate_monomials(coords, max_degree, i, cur, deg + 1, out);
            --cur.back().second;
        } else {
            cur.emplace_back(v, 1);
            enumerate_monomials(coords, max_degree, i, cur, deg + 1, out);
            cur.pop_back();
        }
    }
}

/// Coefficientwise system sum_j w_j F(basis_j) = rhs, rows indexed by (component, monomial).
template <class Fieldify>
std::pair<std::vector<std::vector<Rational>>, std::vector<Rational>> assemble(const std::vector<Polynomial>& basis,
                                                                              Fieldify&& field,
                                                                              const VectorField& rhs) {
    std::map<std::size_t, std::map<Monomial, std::size_t, MonomialOrder>> rows;
    std::size_t nrows = 0;
    auto row = [&](std::size_t comp, const Monomial& m) {
        auto [it, ins] = rows[comp].try_emplace(m, nrows);
        if (ins) ++nrows;
        return it->second;
    };
    std::vector<std::vector<std::pair<std::size_t, Rational>>> cols(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        VectorField f = field(basis[j]);
        for (const auto& [comp, p] : f.entries())
            for (const auto& [m, c] : p.terms()) cols[j].emplace_back(row(comp, m), c);
    }
    std::vector<std::pair<std::size_t, Rational>> rhs_entries;
    for (const auto& [comp, p] : rhs.entries())
        for (const auto& [m, c] : p.terms()) rhs_entries.emplace_back(row(comp, m), c);
    std::vector<std::vector<Rational>> a(nrows, std::vector<Rational>(basis.size(), Rational(0)));
    std::vector<Rational> b(nrows, Rational(0));
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (auto& [r, c] : cols[j]) a[r][j] = c;
    for (auto& [r, c] : rhs_entries) b[r] = c;
    return {std::move(a), std::move(b)};
}

inline Polynomial combine(const TablePtr& table, const std::vector<Monomial>& ansatz, const std::vector<Rational>& x) {
    Polynomial p(table);
    for (std::size_t j = 0; j < ansatz.size(); ++j) p.add_term(ansatz[j], x[j]);
    return p;
}

}  // namespace detail

/// Lenard-Magri expansion of the pencil Casimir starting from `seed` (a Casimir of P1):
/// solves P1 dc_{i+1} = P2 dc_i for c_0 .. c_{order-1} on a polynomial ansatz of degree <= degree_bound.
inline CasimirTower casimir_expand(const PoissonPencil& pencil, const Polynomial& seed, int order,
                                   std::optional<int> degree_bound = std::nullopt,
                                   KernelPolicy policy = KernelPolicy::canonical) {
    const auto& table = pencil.table();
    require_same_table(table, seed.table());
    if (order < 0) throw ValidationError("order must be nonnegative");
    const auto& p1 = pencil.first();
    const auto& p2 = pencil.second();
    if (!bivector_field(p1, seed).is_zero()) throw SeedNotCasimir();

    int bound = degree_bound.value_or(std::max(seed.degree(), 0) + order + 1);
    auto coords = all_coordinates(*table);
    std::vector<Monomial> ansatz;
    std::vector<Monomial::Factor> cur;
    detail::enumerate_monomials(coords, bound, 0, cur, 0, ansatz);

    auto f1 = [&](const Polynomial& c) { return bivector_field(p1, c); };
    auto f2 = [&](const Polynomial& c) { return bivector_field(p2, c); };

    CasimirTower tower{seed, {}, {}, false};
    auto common_casimir = [&](const Polynomial& c) {
        return !c.is_zero() && f1(c).is_zero() && f2(c).is_zero();
    };
    tower.resonance = common_casimir(seed);

    std::vector<Polynomial> ansatz_polys;
    for (const auto& m : ansatz) ansatz_polys.push_back(Polynomial::term(table, m, 1));

    Polynomial prev = seed;
    for (int step = 0; step < order; ++step) {
        auto [a, b] = detail::assemble(ansatz_polys, f1, f2(prev));
        auto sol = solve_linear(std::move(a), std::move(b), ansatz.size());
        if (!sol) throw NoSolutionWithinDegree(step, bound);
        tower.kernel_dimensions.push_back(sol->kernel.size());
        if (policy == KernelPolicy::strict && !sol->kernel.empty())
            throw AmbiguousSolution(step, sol->kernel.size());

        Polynomial c = detail::combine(table, ansatz, sol->particular);
        if (!sol->kernel.empty()) {
            // Shift by a kernel element so that c becomes a Casimir of P2, when possible.
            std::vector<Polynomial> basis;
            for (const auto& k : sol->kernel) basis.push_back(detail::combine(table, ansatz, k));
            auto [ka, kb] = detail::assemble(basis, f2, VectorField(table) - f2(c));
            if (auto w = solve_linear(std::move(ka), std::move(kb), basis.size()))
                for (std::size_t j = 0; j < basis.size(); ++j)
                    if (w->particular[j] != 0) c += basis[j] * w->particular[j];
        }
        if (common_casimir(c)) tower.resonance = true;
        tower.coefficients.push_back(c);
        prev = c;
    }
    return tower;
}

}  // namespace pnrec
