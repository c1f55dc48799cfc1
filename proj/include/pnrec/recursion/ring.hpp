#pragma once

#include <map>
#include <string>
#include <vector>

#include "pnrec/poisson/linear_solve.hpp"
#include "pnrec/tensor/fields.hpp"

namespace pnrec {

/// Finite graded ring V with basis classes theta_a, cup-product structure constants,
/// an integration functional and the pairing eta_{ab} = integral(theta_a theta_b).
class CohomologyRing {
public:
    struct Class {
        std::string name;
        int degree = 0;
        Parity parity = Parity::even;
        /// Formal variable multiplying this class in t = sum t^a theta_a.
        std::string variable;

        friend bool operator==(const Class&, const Class&) = default;
    };

    /// products[a][b][c] is the coefficient of theta_c in theta_a theta_b.
    using Products = std::vector<std::vector<std::vector<Rational>>>;

    CohomologyRing(std::vector<Class> basis, Products products, std::vector<Rational> integral,
                   std::vector<std::vector<Rational>> eta)
        : basis_(std::move(basis)), products_(std::move(products)), integral_(std::move(integral)),
          eta_(std::move(eta)) {
        validate();
        eta_inverse_ = invert(eta_);
    }

    std::size_t dimension() const noexcept { return basis_.size(); }
    const std::vector<Class>& basis() const noexcept { return basis_; }
    const Products& products() const noexcept { return products_; }
    const std::vector<Rational>& integral() const noexcept { return integral_; }
    const std::vector<std::vector<Rational>>& eta() const noexcept { return eta_; }
    const std::vector<std::vector<Rational>>& eta_inverse() const noexcept { return eta_inverse_; }

    /// Index of the unit class (theta_u theta_b = theta_b for every b).
    std::size_t index_of_unit() const {
        const std::size_t n = basis_.size();
        for (std::size_t u = 0; u < n; ++u) {
            bool unit = true;
            for (std::size_t b = 0; b < n && unit; ++b)
                for (std::size_t c = 0; c < n && unit; ++c) unit = products_[u][b][c] == (b == c ? 1 : 0);
            if (unit) return u;
        }
        throw ValidationError("cohomology ring has no unit class");
    }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i].name == name) return i;
        throw ValidationError("unknown cohomology class '" + std::string(name) + "'");
    }

    friend bool operator==(const CohomologyRing& a, const CohomologyRing& b) {
        return a.basis_ == b.basis_ && a.products_ == b.products_ && a.integral_ == b.integral_ &&
               a.eta_ == b.eta_;
    }

private:
    void validate() const {
        const std::size_t n = basis_.size();
        if (n == 0) throw ValidationError("cohomology ring needs at least one class");
        if (products_.size() != n || integral_.size() != n || eta_.size() != n)
            throw ValidationError("cohomology ring tables do not match the basis size");
        for (const auto& row : products_) {
            if (row.size() != n) throw ValidationError("product table has wrong shape");
            for (const auto& v : row)
                if (v.size() != n) throw ValidationError("product table has wrong shape");
        }
        for (const auto& row : eta_)
            if (row.size() != n) throw ValidationError("eta has wrong shape");
        int top = 0;
        for (const auto& c : basis_) {
            top = std::max(top, c.degree);
            if ((c.degree % 2 != 0) != is_odd(c.parity))
                throw ValidationError("class '" + c.name + "' has parity inconsistent with its degree");
        }
        for (std::size_t a = 0; a < n; ++a)
            if (integral_[a] != 0 && basis_[a].degree != top)
                throw ValidationError("integral is nonzero on class '" + basis_[a].name + "' off top degree");
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                int s = koszul(basis_[a].parity, basis_[b].parity);
                for (std::size_t c = 0; c < n; ++c) {
                    if (products_[a][b][c] != s * products_[b][a][c])
                        throw ValidationError("product is not graded commutative on '" + basis_[a].name + "', '" +
                                              basis_[b].name + "'");
                    if (products_[a][b][c] != 0 && basis_[c].degree != basis_[a].degree + basis_[b].degree)
                        throw ValidationError("product does not respect degrees");
                }
            }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    for (std::size_t e = 0; e < n; ++e) {
                        Rational left = 0, right = 0;
                        for (std::size_t d = 0; d < n; ++d) {
                            left += products_[a][b][d] * products_[d][c][e];
                            right += products_[b][c][d] * products_[a][d][e];
                        }
                        if (left != right) throw ValidationError("product is not associative");
                    }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                Rational v = 0;
                for (std::size_t c = 0; c < n; ++c) v += products_[a][b][c] * integral_[c];
                if (v != eta_[a][b]) throw ValidationError("eta differs from the integral of the product");
            }
    }

    static std::vector<std::vector<Rational>> invert(const std::vector<std::vector<Rational>>& m) {
        const std::size_t n = m.size();
        std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Rational> e(n, Rational(0));
            e[j] = 1;
            auto sol = solve_linear(m, e, n);
            if (!sol || !sol->kernel.empty()) throw ValidationError("eta is degenerate");
            for (std::size_t i = 0; i < n; ++i) inv[i][j] = sol->particular[i];
        }
        return inv;
    }

    std::vector<Class> basis_;
    Products products_;
    std::vector<Rational> integral_;
    std::vector<std::vector<Rational>> eta_;
    std::vector<std::vector<Rational>> eta_inverse_;
};

/// H*(S^1) with basis 1 (variable t1) and dphi (variable tau1), integral(dphi) = 1.
inline CohomologyRing circle_cohomology(std::string t_name = "t1", std::string tau_name = "tau1") {
    std::vector<CohomologyRing::Class> basis{{"1", 0, Parity::even, std::move(t_name)},
                                             {"dphi", 1, Parity::odd, std::move(tau_name)}};
    CohomologyRing::Products prod(2, std::vector<std::vector<Rational>>(2, std::vector<Rational>(2, Rational(0))));
    prod[0][0][0] = 1;
    prod[0][1][1] = 1;
    prod[1][0][1] = 1;
    return CohomologyRing(std::move(basis), std::move(prod), {Rational(0), Rational(1)},
                          {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
}

/// Ring element sum_a F_a theta_a with polynomial coefficients written to the left of the classes.
using RingElement = std::vector<Polynomial>;

namespace detail {

inline RingElement ring_multiply(const CohomologyRing& ring, const RingElement& f, const RingElement& g) {
    const std::size_t n = ring.dimension();
    const auto& table = f.front().table();
    RingElement out(n, Polynomial(table));
    for (std::size_t a = 0; a < n; ++a) {
        if (f[a].is_zero()) continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (g[b].is_zero()) continue;
            // F_a theta_a G_b theta_b = (-1)^{|theta_a||G_b|} F_a G_b theta_a theta_b
            Polynomial fg(table);
            for (Parity pg : {Parity::even, Parity::odd}) {
                auto part = g[b].parity_part(pg);
                if (part.is_zero()) continue;
                auto prod = f[a] * part;
                fg += koszul(ring.basis()[a].parity, pg) > 0 ? prod : -prod;
            }
            if (fg.is_zero()) continue;
            for (std::size_t c = 0; c < n; ++c)
                if (ring.products()[a][b][c] != 0) out[c] += fg * ring.products()[a][b][c];
        }
    }
    return out;
}

}  // namespace detail

/// C^mu_{alpha,n} = d^2/dt^alpha dt^nu integral(t^{n+3}/(n+3)!) eta^{nu mu}, for n >= -1.
/// With `tau_zero` the result is restricted to tau = 0 (odd time variables set to zero).
inline std::map<std::size_t, Polynomial> c_coefficients(const CohomologyRing& ring, const TablePtr& table, int n,
                                                        std::size_t alpha, bool tau_zero = false) {
    if (n < -1) throw ValidationError("c_coefficients needs n >= -1");
    const std::size_t dim = ring.dimension();
    if (alpha >= dim) throw ValidationError("class index out of range");
    std::vector<std::size_t> vars(dim);
    RingElement t(dim, Polynomial(table));
    for (std::size_t a = 0; a < dim; ++a) {
        vars[a] = table->index_of(ring.basis()[a].variable);
        if ((*table)[vars[a]].parity != ring.basis()[a].parity)
            throw ValidationError("variable '" + ring.basis()[a].variable + "' has the wrong parity for its class");
        t[a] = Polynomial::variable(table, vars[a]);
    }

    const int r = n + 3;
    RingElement acc(dim, Polynomial(table));
    acc[ring.index_of_unit()] = Polynomial::constant(table, 1);
    mpz_class fact = 1;
    for (int i = 0; i < r; ++i) {
        acc = detail::ring_multiply(ring, acc, t);
        fact *= i + 1;
    }
    Polynomial integral(table);
    for (std::size_t a = 0; a < dim; ++a)
        if (ring.integral()[a] != 0) integral += acc[a] * ring.integral()[a];
    integral *= Rational(1) / Rational(fact);

    std::map<std::size_t, Polynomial> out;
    for (std::size_t nu = 0; nu < dim; ++nu) {
        auto second = integral.derivative(vars[nu]).derivative(vars[alpha]);
        if (second.is_zero()) continue;
        for (std::size_t mu = 0; mu < dim; ++mu) {
            const auto& e = ring.eta_inverse()[nu][mu];
            if (e == 0) continue;
            auto [it, ins] = out.try_emplace(mu, table);
            it->second += second * e;
        }
    }
    std::map<std::size_t, Polynomial> result;
    for (auto& [mu, p] : out) {
        if (tau_zero) p = p.set_zero([&](std::size_t v) { return (*table)[v].kind == VarKind::tau; });
        if (!p.is_zero()) result.emplace(mu, std::move(p));
    }
    return result;
}

}  // namespace pnrec
