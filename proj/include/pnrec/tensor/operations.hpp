#pragma once

#include <set>
#include <span>

#include "pnrec/tensor/fields.hpp"

namespace pnrec {

namespace detail {

inline void require_even_coordinates(const VariableTable& table, std::span<const std::size_t> coords,
                                     const char* op) {
    for (auto c : coords)
        if (table.odd(c))
            throw ValidationError(std::string(op) + " supports even coordinates only; '" + table[c].name +
                                  "' is odd");
}

template <class Map>
void require_even_indices(const Map& m, const char* op) {
    const auto& table = *m.table();
    for (const auto& [k, p] : m.entries()) {
        std::vector<std::size_t> idx;
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, std::size_t>) idx = {k};
        else if constexpr (std::is_same_v<std::decay_t<decltype(k)>, std::pair<std::size_t, std::size_t>>)
            idx = {k.first, k.second};
        else idx = {k[0], k[1], k[2]};
        require_even_coordinates(table, idx, op);
    }
}

}  // namespace detail

/// (N X)^b = sum_a X^a N_a^b.
inline VectorField apply_endomorphism(const Endomorphism11& n, const VectorField& x) {
    require_same_table(n.table(), x.table());
    VectorField out(x.table());
    for (const auto& [key, nab] : n.entries()) {
        const auto* xa = x.find(key.first);
        if (xa) out.add(key.second, *xa * nab);
    }
    return out;
}

/// Composition (N M)(X) = N(M(X)): (NM)_a^b = sum_c M_a^c N_c^b.
inline Endomorphism11 compose(const Endomorphism11& n, const Endomorphism11& m) {
    require_same_table(n.table(), m.table());
    Endomorphism11 out(n.table());
    for (const auto& [km, mac] : m.entries())
        for (const auto& [kn, ncb] : n.entries())
            if (km.second == kn.first) out.add({km.first, kn.second}, mac * ncb);
    return out;
}

/// [X,Y]^b = X(Y^b) - (-1)^{|X||Y|} Y(X^b).
inline VectorField lie_bracket(const VectorField& x, const VectorField& y) {
    require_same_table(x.table(), y.table());
    auto px = x.parity(), py = y.parity();
    if (!px || !py) throw ValidationError("lie_bracket needs parity-homogeneous vector fields");
    int sign = koszul(*px, *py);
    VectorField out(x.table());
    for (const auto& [b, yb] : y.entries()) out.add(b, x(yb));
    for (const auto& [b, xb] : x.entries()) {
        auto t = y(xb);
        out.add(b, sign > 0 ? -t : t);
    }
    return out;
}

/// (L_X N)_a^b = X^c d_c N_a^b - N_a^c d_c X^b + (d_a X^c) N_c^b, with `a` ranging over `coords`.
inline Endomorphism11 lie_derivative_endomorphism(const VectorField& x, const Endomorphism11& n,
                                                  std::span<const std::size_t> coords) {
    require_same_table(x.table(), n.table());
    detail::require_even_indices(n, "lie_derivative_endomorphism");
    detail::require_even_indices(x, "lie_derivative_endomorphism");
    detail::require_even_coordinates(*x.table(), coords, "lie_derivative_endomorphism");
    Endomorphism11 out(n.table());
    for (const auto& [key, nab] : n.entries()) out.add(key, x(nab));
    for (const auto& [key, nac] : n.entries()) {
        auto c = key.second;
        for (const auto& [b, xb] : x.entries()) {
            auto d = xb.derivative(c);
            if (!d.is_zero()) out.add({key.first, b}, -(nac * d));
        }
    }
    for (const auto& [key, ncb] : n.entries()) {
        const auto* xc = x.find(key.first);
        if (!xc) continue;
        for (auto a : coords) {
            auto d = xc->derivative(a);
            if (!d.is_zero()) out.add({a, key.second}, d * ncb);
        }
    }
    return out;
}

inline Endomorphism11 lie_derivative_endomorphism(const VectorField& x, const Endomorphism11& n) {
    auto coords = even_coordinates(*x.table());
    return lie_derivative_endomorphism(x, n, coords);
}

/// (L_X B)^{ab} = X^c d_c B^{ab} - (d_c X^a) B^{cb} - B^{ac} d_c X^b. Keeps the symmetry flag.
inline Bivector lie_derivative_bivector(const VectorField& x, const Bivector& b) {
    require_same_table(x.table(), b.table());
    detail::require_even_indices(b, "lie_derivative_bivector");
    detail::require_even_indices(x, "lie_derivative_bivector");
    Bivector out(b.table(), b.symmetry());
    for (const auto& [key, bab] : b.entries()) {
        out.add(key, x(bab));
        // (d_c X^a) B^{cb} with c = key.first
        for (const auto& [a, xa] : x.entries()) {
            auto d = xa.derivative(key.first);
            if (!d.is_zero()) out.add({a, key.second}, -(d * bab));
        }
        // B^{ac} d_c X^b with c = key.second
        for (const auto& [bb, xb] : x.entries()) {
            auto d = xb.derivative(key.second);
            if (!d.is_zero()) out.add({key.first, bb}, -(bab * d));
        }
    }
    return out;
}

/// Y^a = sum_b B^{ab} w_b.
inline VectorField contract_bivector(const Bivector& b, const OneForm& w) {
    require_same_table(b.table(), w.table());
    VectorField out(b.table());
    for (const auto& [key, bab] : b.entries()) {
        const auto* wb = w.find(key.second);
        if (wb) out.add(key.first, bab * *wb);
    }
    return out;
}

/// Nijenhuis torsion
///   T^u_{ab} = N^u_g (d_b N^g_a - d_a N^g_b) - (d_g N^u_a) N^g_b + (d_g N^u_b) N^g_a
/// where N^u_g is the entry with lower index g and upper index u.
/// On coordinate fields this equals [NX,NY] - N[NX,Y] - N[X,NY] + N^2[X,Y] evaluated at (d_a, d_b).
inline Tensor12 nijenhuis_torsion(const Endomorphism11& n, std::span<const std::size_t> coords) {
    detail::require_even_indices(n, "nijenhuis_torsion");
    detail::require_even_coordinates(*n.table(), coords, "nijenhuis_torsion");
    const auto& table = n.table();
    Tensor12 out(table);
    // rows[g] = entries with lower index g: (upper, poly)
    std::map<std::size_t, std::vector<std::pair<std::size_t, const Polynomial*>>> rows;
    for (const auto& [key, p] : n.entries()) rows[key.first].emplace_back(key.second, &p);

    for (std::size_t ia = 0; ia < coords.size(); ++ia) {
        for (std::size_t ib = ia + 1; ib < coords.size(); ++ib) {
            auto a = coords[ia], b = coords[ib];
            std::map<std::size_t, Polynomial> acc;
            auto add = [&](std::size_t u, Polynomial p) {
                if (p.is_zero()) return;
                auto it = acc.find(u);
                if (it == acc.end()) acc.emplace(u, std::move(p));
                else it->second += p;
            };
            // N^u_g (d_b N^g_a - d_a N^g_b): g runs over uppers of rows a and b
            std::map<std::size_t, Polynomial> inner;
            for (auto [g, p] : rows[a]) {
                auto d = p->derivative(b);
                if (!d.is_zero()) inner.emplace(g, Polynomial(table)).first->second += d;
            }
            for (auto [g, p] : rows[b]) {
                auto d = p->derivative(a);
                if (!d.is_zero()) inner.emplace(g, Polynomial(table)).first->second -= d;
            }
            for (const auto& [g, val] : inner)
                for (auto [u, ngu] : rows[g]) add(u, *ngu * val);
            // -(d_g N^u_a) N^g_b + (d_g N^u_b) N^g_a
            for (auto [g, ngb] : rows[b])
                for (auto [u, nua] : rows[a]) add(u, -(nua->derivative(g) * *ngb));
            for (auto [g, nga] : rows[a])
                for (auto [u, nub] : rows[b]) add(u, nub->derivative(g) * *nga);
            for (auto& [u, p] : acc) {
                if (p.is_zero()) continue;
                out.set({u, a, b}, p);
                out.set({u, b, a}, -p);
            }
        }
    }
    return out;
}

inline Tensor12 nijenhuis_torsion(const Endomorphism11& n) {
    auto coords = even_coordinates(*n.table());
    return nijenhuis_torsion(n, coords);
}

/// Evaluate a (1,2)-tensor on two vector fields: T(X,Y)^u = X^a Y^b T^u_{ab}.
inline VectorField evaluate(const Tensor12& t, const VectorField& x, const VectorField& y) {
    VectorField out(t.table());
    for (const auto& [key, p] : t.entries()) {
        const auto* xa = x.find(key[1]);
        const auto* yb = y.find(key[2]);
        if (xa && yb) out.add(key[0], *xa * *yb * p);
    }
    return out;
}

/// Residuals of the two Poisson-Nijenhuis compatibility conditions.
struct MagriMorosiResidual {
    PolyMatrix first;   // (N Pi - Pi tN)^{ij}
    PolyArray3 second;  // indices (k, j, m)
    bool compatible() const { return first.is_zero() && second.is_zero(); }
};

/// residual1^{ij} = N^i_k P^{kj} - P^{ik} N^j_k
/// residual2^{kj}_m = P^{lj}(d_l N^k_m - d_m N^k_l) - P^{kl} d_l N^j_m - N^l_m d_l P^{kj} + N^j_l d_m P^{kl}
inline MagriMorosiResidual magri_morosi_compatibility(const Endomorphism11& n, const Bivector& p,
                                                      std::span<const std::size_t> coords) {
    require_same_table(n.table(), p.table());
    if (p.symmetry() != Symmetry::antisymmetric)
        throw ValidationError("magri_morosi_compatibility needs an antisymmetric bivector");
    detail::require_even_coordinates(*n.table(), coords, "magri_morosi_compatibility");
    const auto& table = n.table();
    const std::size_t d = coords.size();
    auto N = [&](std::size_t upper, std::size_t lower) { return n.entry(coords[lower], coords[upper]); };
    auto P = [&](std::size_t i, std::size_t j) { return p.entry(coords[i], coords[j]); };
    auto D = [&](const Polynomial& f, std::size_t i) { return f.derivative(coords[i]); };

    MagriMorosiResidual r;
    r.first.coords.assign(coords.begin(), coords.end());
    r.first.data.assign(d * d, Polynomial(table));
    r.second.coords.assign(coords.begin(), coords.end());
    r.second.data.assign(d * d * d, Polynomial(table));

    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) r.first.at(i, j) += N(i, k) * P(k, j) - P(i, k) * N(j, k);

    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t m = 0; m < d; ++m) {
                Polynomial acc(table);
                for (std::size_t l = 0; l < d; ++l) {
                    acc += P(l, j) * (D(N(k, m), l) - D(N(k, l), m));
                    acc -= P(k, l) * D(N(j, m), l);
                    acc -= N(l, m) * D(P(k, j), l);
                    acc += N(j, l) * D(P(k, l), m);
                }
                r.second.at(k, j, m) = std::move(acc);
            }
    return r;
}

}  // namespace pnrec
