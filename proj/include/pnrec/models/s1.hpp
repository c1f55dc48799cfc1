#pragma once

#include <string>

#include "pnrec/models/model.hpp"

namespace pnrec::s1 {

inline std::string q_name(int k) { return "q" + std::to_string(k); }

/// v^k for the SFT model: v^k = q_k (k > 0), v^{-k} = p_k, v^0 = t1.
inline std::string v_name(int k) {
    if (k == 0) return "t1";
    return k > 0 ? "v" + std::to_string(k) : "vm" + std::to_string(-k);
}

inline void require_orbit(int k) {
    if (k < 1) throw ValidationError("max orbit must be >= 1");
}

/// Contact-homology model of S^1 with N_k^l = ((l-k)/k) q^{l-k} (l > k) and X_{1,0}^k = k q^k.
inline Model build_ch_model(int max_orbit) {
    require_orbit(max_orbit);
    auto t = std::make_shared<VariableTable>();
    t->add({.name = "t1", .kind = VarKind::t});
    t->add({.name = "tau1", .kind = VarKind::tau, .parity = Parity::odd});
    for (int k = 1; k <= max_orbit; ++k)
        t->add({.name = q_name(k), .kind = VarKind::q, .kappa = k, .orbit_index = k});
    TablePtr table = t;

    Model m{table, TruncationWindow{max_orbit, std::nullopt}};
    m.poisson = StructuralPoisson::from_table(table);
    Endomorphism11 n(table);
    VectorField x(table);
    for (int k = 1; k <= max_orbit; ++k) {
        auto qk = table->index_of(q_name(k));
        x.set(qk, Polynomial::variable(table, qk) * Rational(k));
        for (int l = k + 1; l <= max_orbit; ++l)
            n.set_entry(qk, table->index_of(q_name(l)),
                        Polynomial::variable(table, q_name(l - k)) * make_rational(l - k, k));
    }
    m.endomorphism = std::move(n);
    m.primaries.emplace("1", std::move(x));
    m.ring = circle_cohomology();
    return m;
}

/// Rational SFT model of S^1: symmetric omega^{kl} = (k+l) v^{k+l} for |k+l| <= K, t-column included.
inline Model build_sft_model(int max_orbit) {
    require_orbit(max_orbit);
    auto t = std::make_shared<VariableTable>();
    t->add({.name = "t1", .kind = VarKind::t});
    for (int k = 1; k <= max_orbit; ++k) {
        t->add({.name = v_name(k), .kind = VarKind::q, .kappa = k, .orbit_index = k});
        t->add({.name = v_name(-k), .kind = VarKind::p, .kappa = k, .orbit_index = k});
    }
    TablePtr table = t;

    Model m{table, TruncationWindow{max_orbit, std::nullopt}};
    m.poisson = StructuralPoisson::from_table(table);
    Bivector omega(table, Symmetry::symmetric);
    for (int k = -max_orbit; k <= max_orbit; ++k)
        for (int l = k; l <= max_orbit; ++l) {
            int s = k + l;
            if (s == 0 || std::abs(s) > max_orbit) continue;
            omega.set_entry(table->index_of(v_name(k)), table->index_of(v_name(l)),
                            Polynomial::variable(table, v_name(s)) * Rational(s));
        }
    m.bivector = std::move(omega);
    return m;
}

namespace detail {

/// Coefficients of z^0..z^max in (sum_j terms[j] z^j)^factors, keeping only powers <= max.
inline std::vector<Polynomial> series_power(const std::vector<Polynomial>& terms, int factors, int max) {
    const auto& table = terms.front().table();
    std::vector<Polynomial> acc(max + 1, Polynomial(table));
    acc[0] = Polynomial::constant(table, 1);
    for (int f = 0; f < factors; ++f) {
        std::vector<Polynomial> next(max + 1, Polynomial(table));
        for (int a = 0; a <= max; ++a) {
            if (acc[a].is_zero()) continue;
            for (int b = 0; a + b <= max && b < static_cast<int>(terms.size()); ++b)
                if (!terms[b].is_zero()) next[a + b] += acc[a] * terms[b];
        }
        acc = std::move(next);
    }
    return acc;
}

inline Rational factorial(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

}  // namespace detail

/// X_{1,n}^l = l/(n+1)! * sum over ordered (n+1)-tuples k_i >= 0 with sum l of q^{k_1}...q^{k_{n+1}},
/// q^0 := t1 (the reading that reproduces the printed n = 1 case).
inline Polynomial ch_field(const TablePtr& table, int n, int l) {
    if (n < 0 || l < 1) throw ValidationError("ch_field needs n >= 0 and l >= 1");
    std::vector<Polynomial> q;
    q.push_back(Polynomial::variable(table, "t1"));
    for (int k = 1; k <= l; ++k) q.push_back(Polynomial::variable(table, q_name(k)));
    auto s = detail::series_power(q, n + 1, l);
    return s[l] * (Rational(l) / detail::factorial(n + 1));
}

/// The printed general formula l/(n-1)! * sum over ordered n-tuples, taken literally (n >= 1).
inline Polynomial ch_field_literal(const TablePtr& table, int n, int l) {
    if (n < 1 || l < 1) throw ValidationError("ch_field_literal needs n >= 1 and l >= 1");
    std::vector<Polynomial> q;
    q.push_back(Polynomial::variable(table, "t1"));
    for (int k = 1; k <= l; ++k) q.push_back(Polynomial::variable(table, q_name(k)));
    auto s = detail::series_power(q, n, l);
    return s[l] * (Rational(l) / detail::factorial(n - 1));
}

/// h_{1,n} = 1/(n+2)! * sum over ordered (n+2)-tuples in [-window, window] with sum 0, v^0 := t1.
inline Polynomial sft_hamiltonian(const TablePtr& table, int n, int window) {
    if (n < -1 || window < 1) throw ValidationError("sft_hamiltonian needs n >= -1 and window >= 1");
    const int factors = n + 2;
    std::vector<Polynomial> v;
    for (int k = -window; k <= window; ++k) v.push_back(Polynomial::variable(table, v_name(k)));
    // Series index is the momentum shifted by `window` per factor.
    auto s = detail::series_power(v, factors, factors * window);
    return s[factors * window] * (Rational(1) / detail::factorial(factors));
}

/// Constant-curve term t1^{n+2}/(n+2)!: the p/q-free part of h_{1,n} (the all-zero tuple).
inline Polynomial constant_curve_term(const TablePtr& table, int n) {
    return power(Polynomial::variable(table, "t1"), n + 2) * (Rational(1) / detail::factorial(n + 2));
}

}  // namespace pnrec::s1

namespace pnrec {

inline Model build_s1_ch_model(int max_orbit) { return s1::build_ch_model(max_orbit); }
inline Model build_s1_sft_model(int max_orbit) { return s1::build_sft_model(max_orbit); }

enum class ClosedFormKind { ch_field, sft_hamiltonian };

/// Closed-form oracle values for the S^1 models. For ch_field `index` is the component l,
/// for sft_hamiltonian it is the window W.
inline Polynomial s1_closed_forms(const TablePtr& table, ClosedFormKind kind, int n, int index) {
    int k_max = 0;
    for (const auto& v : table->variables())
        if (v.orbit_index) k_max = std::max(k_max, *v.orbit_index);
    if (index > k_max) throw WindowTooSmall(k_max, index);
    return kind == ClosedFormKind::ch_field ? s1::ch_field(table, n, index) : s1::sft_hamiltonian(table, n, index);
}

}  // namespace pnrec
