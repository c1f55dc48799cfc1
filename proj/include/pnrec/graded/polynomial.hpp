#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "pnrec/graded/monomial.hpp"
#include "pnrec/graded/variable.hpp"

namespace pnrec {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Drop monomials that contain a p/q variable with |orbit_index| > max_orbit, or whose
/// total degree exceeds max_degree.
struct TruncationWindow {
    int max_orbit = 1;
    std::optional<int> max_degree;

    bool admits(const VariableTable& table, const Monomial& m) const {
        if (max_degree && static_cast<int>(m.degree()) > *max_degree) return false;
        for (auto [v, e] : m.factors()) {
            const auto& var = table[v];
            if (var.is_pq() && var.orbit_index && std::abs(*var.orbit_index) > max_orbit) return false;
        }
        return true;
    }

    friend bool operator==(const TruncationWindow&, const TruncationWindow&) = default;
};

/// Sparse graded-commutative polynomial with exact rational coefficients.
/// Zero coefficients are never stored, so structural equality is mathematical equality.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, MonomialOrder>;

    explicit Polynomial(TablePtr table) : table_(std::move(table)) {}

    static Polynomial constant(TablePtr table, const Rational& c) {
        Polynomial p(std::move(table));
        if (c != 0) p.terms_.emplace(Monomial{}, c);
        return p;
    }

    static Polynomial variable(TablePtr table, std::size_t var) {
        if (var >= table->size()) throw UnknownVariable("#" + std::to_string(var));
        Polynomial p(std::move(table));
        p.terms_.emplace(Monomial::single(var), Rational(1));
        return p;
    }

    static Polynomial variable(TablePtr table, std::string_view name) {
        auto idx = table->index_of(name);
        return variable(std::move(table), idx);
    }

    static Polynomial term(TablePtr table, const Monomial& m, const Rational& c) {
        Polynomial p(std::move(table));
        p.add_term(m, c);
        return p;
    }

    const TablePtr& table() const noexcept { return table_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Accumulate c*m; removes the entry when it cancels.
    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    /// Parity when homogeneous; nullopt for mixed parity. Zero counts as even.
    std::optional<Parity> parity() const {
        std::optional<Parity> p;
        for (const auto& [m, c] : terms_) {
            auto q = m.parity(*table_);
            if (p && *p != q) return std::nullopt;
            p = q;
        }
        return p.value_or(Parity::even);
    }

    Polynomial parity_part(Parity which) const {
        Polynomial out(table_);
        for (const auto& [m, c] : terms_)
            if (m.parity(*table_) == which) out.terms_.emplace_hint(out.terms_.end(), m, c);
        return out;
    }

    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
        return d;
    }

    Polynomial& operator+=(const Polynomial& o) {
        require_same_table(table_, o.table_);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        require_same_table(table_, o.table_);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    Polynomial& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [m, c] : terms_) c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) {
        for (auto& [m, c] : a.terms_) c = -c;
        return a;
    }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        require_same_table(a.table_, b.table_);
        Polynomial out(a.table_);
        const auto& table = *a.table_;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                auto [m, sign] = multiply(table, ma, mb);
                if (sign == 0) continue;
                Rational c = ca * cb;
                if (sign < 0) c = -c;
                out.add_term(m, c);
            }
        }
        return out;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (!same_table(a.table_, b.table_)) return false;
        return a.terms_ == b.terms_;
    }

    /// Left graded partial derivative with respect to variable `var`.
    Polynomial derivative(std::size_t var) const {
        if (var >= table_->size()) throw UnknownVariable("#" + std::to_string(var));
        Polynomial out(table_);
        for (const auto& [m, c] : terms_) {
            auto [factor, rest] = derive(*table_, m, var);
            if (factor == 0) continue;
            out.add_term(rest, c * factor);
        }
        return out;
    }

    Polynomial derivative(std::string_view name) const { return derivative(table_->index_of(name)); }

    Polynomial truncate(const TruncationWindow& w) const {
        return filter([&](const Monomial& m) { return w.admits(*table_, m); });
    }

    Polynomial filter(const std::function<bool(const Monomial&)>& keep) const {
        Polynomial out(table_);
        for (const auto& [m, c] : terms_)
            if (keep(m)) out.terms_.emplace_hint(out.terms_.end(), m, c);
        return out;
    }

    /// Set the given variables to zero (drop every monomial that contains one of them).
    template <class Pred>
    Polynomial set_zero(Pred is_zeroed) const {
        return filter([&](const Monomial& m) {
            for (auto [v, e] : m.factors())
                if (is_zeroed(v)) return false;
            return true;
        });
    }

    /// Reinterpret over another table that contains every variable used here.
    Polynomial rebase(const TablePtr& target) const {
        if (same_table(table_, target)) {
            Polynomial p = *this;
            p.table_ = target;
            return p;
        }
        Polynomial out(target);
        for (const auto& [m, c] : terms_) {
            std::vector<Monomial::Factor> raw;
            for (auto [v, e] : m.factors())
                raw.emplace_back(static_cast<std::uint32_t>(target->index_of((*table_)[v].name)), e);
            auto [nm, sign] = normalize_monomial(*target, raw);
            if (sign != 0) out.add_term(nm, sign > 0 ? c : Rational(-c));
        }
        return out;
    }

    std::string to_string() const;

private:
    TablePtr table_;
    Terms terms_;
};

inline std::string monomial_to_string(const VariableTable& table, const Monomial& m) {
    std::string s;
    for (auto [v, e] : m.factors()) {
        if (!s.empty()) s += '*';
        s += table[v].name;
        if (e > 1) s += '^' + std::to_string(e);
    }
    return s;
}

/// Canonical text form: terms in MonomialOrder, coefficients as a/b (denominator omitted when 1).
inline std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational mag = abs(c);
        bool neg = c < 0;
        if (neg) out += '-';
        else if (!first) out += '+';
        first = false;
        if (m.is_unit()) {
            out += mag.get_str();
        } else {
            if (mag != 1) out += mag.get_str() + '*';
            out += monomial_to_string(*table_, m);
        }
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

inline Polynomial mul(const Polynomial& f, const Polynomial& g) { return f * g; }
inline Polynomial partial_derivative(const Polynomial& f, std::size_t var) { return f.derivative(var); }
inline Polynomial truncate(const Polynomial& f, const TruncationWindow& w) { return f.truncate(w); }

inline Polynomial power(const Polynomial& f, unsigned n) {
    Polynomial r = Polynomial::constant(f.table(), 1);
    for (unsigned i = 0; i < n; ++i) r = r * f;
    return r;
}

/// Sign (-1)^{a b} for parities.
inline int koszul(Parity a, Parity b) { return (is_odd(a) && is_odd(b)) ? -1 : 1; }

}  // namespace pnrec
