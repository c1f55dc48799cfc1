#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pnrec/graded/variable.hpp"

namespace pnrec {

/// Product of variables sorted by the table's declaration order.
/// Odd variables occur with exponent exactly 1.
class Monomial {
public:
    using Factor = std::pair<std::uint32_t, std::uint32_t>;  // (variable index, exponent)

    Monomial() = default;

    static Monomial single(std::size_t var, std::uint32_t exp = 1) {
        Monomial m;
        if (exp > 0) m.factors_.emplace_back(static_cast<std::uint32_t>(var), exp);
        return m;
    }

    /// Build from factors that are already sorted, merged and valid.
    static Monomial from_sorted(std::vector<Factor> f) {
        Monomial m;
        m.factors_ = std::move(f);
        return m;
    }

    std::span<const Factor> factors() const noexcept { return factors_; }
    bool is_unit() const noexcept { return factors_.empty(); }

    std::uint32_t degree() const {
        std::uint32_t d = 0;
        for (auto [v, e] : factors_) d += e;
        return d;
    }

    std::uint32_t exponent(std::size_t var) const {
        auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{static_cast<std::uint32_t>(var), 0},
                                   [](const Factor& a, const Factor& b) { return a.first < b.first; });
        if (it != factors_.end() && it->first == var) return it->second;
        return 0;
    }

    bool contains(std::size_t var) const { return exponent(var) > 0; }

    Parity parity(const VariableTable& table) const {
        bool odd = false;
        for (auto [v, e] : factors_)
            if (table.odd(v) && (e % 2 == 1)) odd = !odd;
        return odd ? Parity::odd : Parity::even;
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;

private:
    std::vector<Factor> factors_;
};

/// Graded-lex order: lower total degree first; within a degree, higher powers of
/// earlier-declared variables first. This is also the canonical print order.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        auto da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        auto fa = a.factors(), fb = b.factors();
        std::size_t i = 0;
        for (; i < fa.size() && i < fb.size(); ++i) {
            if (fa[i].first != fb[i].first) return fa[i].first < fb[i].first;
            if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second;
        }
        return false;  // equal degree and equal prefix means equal
    }
};

/// Result of sorting an arbitrary product of variables into canonical order.
struct NormalizedMonomial {
    Monomial monomial;
    int sign = 1;  // +1, -1, or 0 when an odd variable repeats
};

/// Sort an unordered product of (variable, exponent) pairs, accumulating the Koszul sign
/// of every transposition of two odd variables.
inline NormalizedMonomial normalize_monomial(const VariableTable& table,
                                             std::span<const Monomial::Factor> raw) {
    std::vector<Monomial::Factor> f;
    f.reserve(raw.size());
    int sign = 1;
    for (auto [v, e] : raw) {
        if (v >= table.size()) throw UnknownVariable("#" + std::to_string(v));
        if (e == 0) continue;
        if (table.odd(v) && e > 1) return {Monomial{}, 0};
        f.emplace_back(v, e);
    }
    // Insertion sort keeps the transposition count explicit; monomials are short.
    for (std::size_t i = 1; i < f.size(); ++i) {
        for (std::size_t j = i; j > 0 && f[j - 1].first > f[j].first; --j) {
            if (table.odd(f[j - 1].first) && table.odd(f[j].first)) sign = -sign;
            std::swap(f[j - 1], f[j]);
        }
    }
    std::vector<Monomial::Factor> merged;
    merged.reserve(f.size());
    for (auto [v, e] : f) {
        if (!merged.empty() && merged.back().first == v) {
            if (table.odd(v)) return {Monomial{}, 0};
            merged.back().second += e;
        } else {
            merged.emplace_back(v, e);
        }
    }
    return {Monomial::from_sorted(std::move(merged)), sign};
}

/// Product of two canonical monomials with its Koszul sign (0 if an odd variable repeats).
inline NormalizedMonomial multiply(const VariableTable& table, const Monomial& a, const Monomial& b) {
    auto fa = a.factors(), fb = b.factors();
    std::vector<Monomial::Factor> out;
    out.reserve(fa.size() + fb.size());
    int sign = 1;
    // Count odd factors of `a` still to the right of the merge cursor.
    std::size_t odd_left_in_a = 0;
    for (auto [v, e] : fa)
        if (table.odd(v)) ++odd_left_in_a;
    std::size_t i = 0, j = 0;
    while (i < fa.size() || j < fb.size()) {
        if (j == fb.size() || (i < fa.size() && fa[i].first < fb[j].first)) {
            if (table.odd(fa[i].first)) --odd_left_in_a;
            out.push_back(fa[i++]);
        } else if (i == fa.size() || fb[j].first < fa[i].first) {
            // fb[j] moves left past every remaining factor of a
            if (table.odd(fb[j].first) && (odd_left_in_a % 2 == 1)) sign = -sign;
            out.push_back(fb[j++]);
        } else {
            if (table.odd(fa[i].first)) return {Monomial{}, 0};
            out.emplace_back(fa[i].first, fa[i].second + fb[j].second);
            ++i;
            ++j;
        }
    }
    return {Monomial::from_sorted(std::move(out)), sign};
}

/// Left partial derivative of a monomial: commute the variable to the front, then strip it.
/// Returns (scalar factor, remaining monomial); factor 0 when the variable is absent.
inline std::pair<long, Monomial> derive(const VariableTable& table, const Monomial& m, std::size_t var) {
    auto f = m.factors();
    std::vector<Monomial::Factor> out;
    out.reserve(f.size());
    long factor = 0;
    int odd_before = 0;
    for (auto [v, e] : f) {
        if (v == var) {
            factor = static_cast<long>(e);
            if (table.odd(v) && (odd_before % 2 == 1)) factor = -factor;
            if (e > 1) out.emplace_back(v, e - 1);
        } else {
            if (table.odd(v) && factor == 0) ++odd_before;
            out.emplace_back(v, e);
        }
    }
    if (factor == 0) return {0, Monomial{}};
    return {factor, Monomial::from_sorted(std::move(out))};
}

}  // namespace pnrec
