#pragma once

#include <random>
#include <vector>

#include "pnrec/graded/parser.hpp"

namespace pnrec::testing {

/// Even q1..q3, odd th1..th2, even t1: a small graded table for algebraic tests.
inline TablePtr graded_table() {
    auto t = std::make_shared<VariableTable>();
    t->add({.name = "t1", .kind = VarKind::t});
    for (int k = 1; k <= 3; ++k)
        t->add({.name = "q" + std::to_string(k), .kind = VarKind::q, .kappa = k, .orbit_index = k});
    t->add({.name = "th1", .kind = VarKind::tau, .parity = Parity::odd});
    t->add({.name = "th2", .kind = VarKind::tau, .parity = Parity::odd});
    return t;
}

/// p1..pn, q1..qn (kappa k), plus t1; the canonical graded Poisson structure lives on it.
inline TablePtr pq_table(int n, bool odd_pair = false) {
    auto t = std::make_shared<VariableTable>();
    t->add({.name = "t1", .kind = VarKind::t});
    for (int k = 1; k <= n; ++k) {
        auto parity = (odd_pair && k == n) ? Parity::odd : Parity::even;
        t->add({.name = "p" + std::to_string(k), .kind = VarKind::p, .parity = parity, .kappa = k, .orbit_index = k});
        t->add({.name = "q" + std::to_string(k), .kind = VarKind::q, .parity = parity, .kappa = k, .orbit_index = k});
    }
    return t;
}

/// Even coordinates x, y, z.
inline TablePtr xyz_table() {
    auto t = std::make_shared<VariableTable>();
    for (auto n : {"x", "y", "z"}) t->add({.name = n, .kind = VarKind::q});
    return t;
}

class Random {
public:
    explicit Random(unsigned seed) : gen_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

    Rational rational() {
        int num = uniform(-4, 4);
        if (num == 0) num = 1;
        return make_rational(num, uniform(1, 3));
    }

    Monomial monomial(const VariableTable& table, int max_degree, const std::vector<std::size_t>& vars) {
        std::vector<Monomial::Factor> raw;
        int deg = uniform(0, max_degree);
        for (int i = 0; i < deg; ++i) raw.emplace_back(static_cast<std::uint32_t>(vars[uniform(0, int(vars.size()) - 1)]), 1);
        auto n = normalize_monomial(table, raw);
        return n.sign == 0 ? Monomial{} : n.monomial;
    }

    Polynomial polynomial(const TablePtr& table, int max_terms = 4, int max_degree = 3,
                          std::vector<std::size_t> vars = {}) {
        if (vars.empty())
            for (std::size_t i = 0; i < table->size(); ++i) vars.push_back(i);
        Polynomial p(table);
        int terms = uniform(0, max_terms);
        for (int i = 0; i < terms; ++i) p.add_term(monomial(*table, max_degree, vars), rational());
        return p;
    }

    /// Parity-homogeneous polynomial of the requested parity.
    Polynomial homogeneous(const TablePtr& table, Parity parity, int max_terms = 4, int max_degree = 3) {
        return polynomial(table, max_terms, max_degree).parity_part(parity);
    }

    std::mt19937& engine() { return gen_; }

private:
    std::mt19937 gen_;
};

}  // namespace pnrec::testing
