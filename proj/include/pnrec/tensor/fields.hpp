#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pnrec/graded/polynomial.hpp"

namespace pnrec {

/// Sparse map from index keys to polynomial components; zero components are not stored.
template <class Key>
class ComponentMap {
public:
    explicit ComponentMap(TablePtr table) : table_(std::move(table)) {}

    const TablePtr& table() const noexcept { return table_; }
    const std::map<Key, Polynomial>& entries() const noexcept { return entries_; }
    bool is_zero() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }

    Polynomial get(const Key& k) const {
        auto it = entries_.find(k);
        return it == entries_.end() ? Polynomial(table_) : it->second;
    }

    const Polynomial* find(const Key& k) const {
        auto it = entries_.find(k);
        return it == entries_.end() ? nullptr : &it->second;
    }

    void set(const Key& k, Polynomial p) {
        require_same_table(table_, p.table());
        if (p.is_zero()) entries_.erase(k);
        else entries_.insert_or_assign(k, std::move(p));
    }

    void add(const Key& k, const Polynomial& p) {
        if (p.is_zero()) return;
        require_same_table(table_, p.table());
        auto it = entries_.find(k);
        if (it == entries_.end()) {
            entries_.emplace(k, p);
        } else {
            it->second += p;
            if (it->second.is_zero()) entries_.erase(it);
        }
    }

    template <class F>
    ComponentMap map_components(F&& f) const {
        ComponentMap out(table_);
        for (const auto& [k, p] : entries_) out.set(k, f(p));
        return out;
    }

    friend bool operator==(const ComponentMap& a, const ComponentMap& b) {
        return same_table(a.table_, b.table_) && a.entries_ == b.entries_;
    }

protected:
    TablePtr table_;
    std::map<Key, Polynomial> entries_;
};

/// Vector field sum_a X^a d/dv^a.
class VectorField : public ComponentMap<std::size_t> {
public:
    using ComponentMap::ComponentMap;
    VectorField(const ComponentMap& m) : ComponentMap(m) {}  // NOLINT

    Polynomial component(std::string_view name) const { return get(table_->index_of(name)); }

    /// Parity of the field as a derivation (|X^a| + |v^a|), if homogeneous. Zero counts as even.
    std::optional<Parity> parity() const {
        std::optional<Parity> out;
        for (const auto& [a, p] : entries_) {
            auto pp = p.parity();
            if (!pp) return std::nullopt;
            Parity q = *pp + (*table_)[a].parity;
            if (out && *out != q) return std::nullopt;
            out = q;
        }
        return out.value_or(Parity::even);
    }

    /// Apply as a derivation: X(f) = sum_a X^a d_a f.
    Polynomial operator()(const Polynomial& f) const {
        require_same_table(table_, f.table());
        Polynomial out(table_);
        for (const auto& [a, xa] : entries_) {
            auto df = f.derivative(a);
            if (!df.is_zero()) out += xa * df;
        }
        return out;
    }

    VectorField operator+(const VectorField& o) const {
        VectorField r = *this;
        for (const auto& [k, p] : o.entries()) r.add(k, p);
        return r;
    }

    VectorField operator-(const VectorField& o) const {
        VectorField r = *this;
        for (const auto& [k, p] : o.entries()) r.add(k, -p);
        return r;
    }

    /// Left multiplication of every component by a scalar polynomial.
    friend VectorField operator*(const Polynomial& s, const VectorField& x) {
        VectorField r(x.table());
        for (const auto& [k, p] : x.entries()) r.set(k, s * p);
        return r;
    }

    VectorField truncate(const TruncationWindow& w) const {
        VectorField r(table_);
        for (const auto& [k, p] : entries_) r.set(k, p.truncate(w));
        return r;
    }
};

/// One-form sum_a w_a dv^a.
class OneForm : public ComponentMap<std::size_t> {
public:
    using ComponentMap::ComponentMap;

    /// Differential df with components d_a f over the given coordinates.
    static OneForm differential(const Polynomial& f, std::span<const std::size_t> coords) {
        OneForm w(f.table());
        for (auto a : coords) w.set(a, f.derivative(a));
        return w;
    }

    static OneForm differential(const Polynomial& f) {
        std::vector<std::size_t> coords(f.table()->size());
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
        return differential(f, coords);
    }
};

/// (1,1)-tensor N = N_a^b dv^a (x) d/dv^b, keyed by (lower a, upper b).
class Endomorphism11 : public ComponentMap<std::pair<std::size_t, std::size_t>> {
public:
    using ComponentMap::ComponentMap;
    Endomorphism11(const ComponentMap& m) : ComponentMap(m) {}  // NOLINT

    Polynomial entry(std::size_t lower, std::size_t upper) const { return get({lower, upper}); }
    void set_entry(std::size_t lower, std::size_t upper, Polynomial p) { set({lower, upper}, std::move(p)); }

    static Endomorphism11 identity(TablePtr table, std::span<const std::size_t> coords) {
        Endomorphism11 n(table);
        for (auto a : coords) n.set_entry(a, a, Polynomial::constant(table, 1));
        return n;
    }

    Endomorphism11 truncate(const TruncationWindow& w) const {
        Endomorphism11 r(table_);
        for (const auto& [k, p] : entries_) r.set(k, p.truncate(w));
        return r;
    }
};

enum class Symmetry { symmetric, antisymmetric };

inline std::string_view to_string(Symmetry s) {
    return s == Symmetry::symmetric ? "symmetric" : "antisymmetric";
}

/// (2,0)-tensor B^{ab} with a declared graded symmetry; both index orders are stored.
class Bivector : public ComponentMap<std::pair<std::size_t, std::size_t>> {
public:
    Bivector(TablePtr table, Symmetry sym) : ComponentMap(std::move(table)), symmetry_(sym) {}

    Symmetry symmetry() const noexcept { return symmetry_; }

    /// Sign relating B^{ba} to B^{ab}.
    int swap_sign(std::size_t a, std::size_t b) const {
        int s = koszul((*table_)[a].parity, (*table_)[b].parity);
        return symmetry_ == Symmetry::symmetric ? s : -s;
    }

    Polynomial entry(std::size_t a, std::size_t b) const { return get({a, b}); }

    /// Set B^{ab} and, through the declared symmetry, B^{ba}.
    void set_entry(std::size_t a, std::size_t b, const Polynomial& p) {
        if (a == b && swap_sign(a, b) < 0 && !p.is_zero())
            throw ValidationError("diagonal entry of an antisymmetric bivector must vanish");
        set({a, b}, p);
        if (a != b) set({b, a}, swap_sign(a, b) > 0 ? p : -p);
    }

    /// True when the stored entries satisfy the declared symmetry.
    bool symmetry_holds() const {
        for (const auto& [k, p] : entries_) {
            auto other = get({k.second, k.first});
            if (!(other == (swap_sign(k.first, k.second) > 0 ? p : -p))) return false;
        }
        return true;
    }

    Bivector operator+(const Bivector& o) const {
        if (o.symmetry_ != symmetry_) throw ValidationError("cannot add bivectors of different symmetry");
        Bivector r = *this;
        for (const auto& [k, p] : o.entries()) r.add(k, p);
        return r;
    }

    Bivector operator*(const Rational& s) const {
        Bivector r(table_, symmetry_);
        for (const auto& [k, p] : entries_) r.set(k, p * s);
        return r;
    }

    Bivector truncate(const TruncationWindow& w) const {
        Bivector r(table_, symmetry_);
        for (const auto& [k, p] : entries_) r.set(k, p.truncate(w));
        return r;
    }

    friend bool operator==(const Bivector& a, const Bivector& b) {
        return a.symmetry_ == b.symmetry_ &&
               static_cast<const ComponentMap&>(a) == static_cast<const ComponentMap&>(b);
    }

private:
    Symmetry symmetry_;
};

/// (1,2)-tensor T^u_{ab}, keyed by (upper u, lower a, lower b).
class Tensor12 : public ComponentMap<std::array<std::size_t, 3>> {
public:
    using ComponentMap::ComponentMap;
    Polynomial entry(std::size_t upper, std::size_t l1, std::size_t l2) const { return get({upper, l1, l2}); }
};

/// Dense square matrix of polynomials indexed by a coordinate list.
struct PolyMatrix {
    std::vector<std::size_t> coords;
    std::vector<Polynomial> data;  // row-major

    Polynomial& at(std::size_t i, std::size_t j) { return data[i * coords.size() + j]; }
    const Polynomial& at(std::size_t i, std::size_t j) const { return data[i * coords.size() + j]; }
    bool is_zero() const {
        for (const auto& p : data)
            if (!p.is_zero()) return false;
        return true;
    }
};

/// Dense cube of polynomials indexed by a coordinate list.
struct PolyArray3 {
    std::vector<std::size_t> coords;
    std::vector<Polynomial> data;

    std::size_t n() const { return coords.size(); }
    Polynomial& at(std::size_t i, std::size_t j, std::size_t k) { return data[(i * n() + j) * n() + k]; }
    const Polynomial& at(std::size_t i, std::size_t j, std::size_t k) const {
        return data[(i * n() + j) * n() + k];
    }
    bool is_zero() const {
        for (const auto& p : data)
            if (!p.is_zero()) return false;
        return true;
    }
};

inline std::vector<std::size_t> even_coordinates(const VariableTable& table) {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < table.size(); ++i)
        if (!table.odd(i)) c.push_back(i);
    return c;
}

inline std::vector<std::size_t> all_coordinates(const VariableTable& table) {
    std::vector<std::size_t> c(table.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = i;
    return c;
}

}  // namespace pnrec
