#pragma once

#include <functional>
#include <map>
#include <optional>

#include "pnrec/tensor/fields.hpp"

namespace pnrec {

/// The canonical bracket pairing every p-variable with its q-partner, weighted by the orbit
/// multiplicity kappa:
///   {f,g} = sum kappa (d_p f d_q g - (-1)^{|f||g|} d_p g d_q f).
class StructuralPoisson {
public:
    struct Pair {
        std::size_t p;
        std::size_t q;
        int kappa;
    };

    /// Pair p- and q-variables with equal orbit_index and kappa. Unpaired q-variables are allowed
    /// (contact-homology tables have no p side); an unpaired p-variable is an error.
    static StructuralPoisson from_table(TablePtr table) {
        StructuralPoisson sp;
        sp.table_ = table;
        std::map<std::pair<int, int>, std::size_t> qs;
        for (std::size_t i = 0; i < table->size(); ++i) {
            const auto& v = (*table)[i];
            if (v.kind != VarKind::q) continue;
            if (!v.orbit_index) continue;
            if (!qs.emplace(std::pair{*v.orbit_index, v.kappa}, i).second)
                throw ValidationError("two q-variables share orbit label " + std::to_string(*v.orbit_index));
        }
        sp.partner_.assign(table->size(), std::nullopt);
        for (std::size_t i = 0; i < table->size(); ++i) {
            const auto& v = (*table)[i];
            if (v.kind != VarKind::p) continue;
            if (!v.orbit_index) throw ValidationError("unpaired p-variable '" + v.name + "' (no orbit_index)");
            auto it = qs.find({*v.orbit_index, v.kappa});
            if (it == qs.end()) throw ValidationError("unpaired p-variable '" + v.name + "'");
            if ((*table)[it->second].parity != v.parity)
                throw ValidationError("p-variable '" + v.name + "' and its partner differ in parity");
            if (sp.partner_[it->second])
                throw ValidationError("q-variable '" + (*table)[it->second].name + "' has two p-partners");
            sp.pairs_.push_back({i, it->second, v.kappa});
            sp.partner_[i] = it->second;
            sp.partner_[it->second] = i;
        }
        return sp;
    }

    const TablePtr& table() const noexcept { return table_; }
    const std::vector<Pair>& pairs() const noexcept { return pairs_; }
    std::optional<std::size_t> partner(std::size_t v) const { return partner_.at(v); }

    /// {f,g} = sum_{a,b} (f d<-_a) Pi^{ab} (d->_b g) with Pi^{pq} = kappa, Pi^{qp} = -(-1)^{|p||q|} kappa.
    /// The right derivative is (-1)^{|a|(|f|+1)} times the left one.
    Polynomial bracket(const Polynomial& f, const Polynomial& g) const {
        require_same_table(table_, f.table());
        require_same_table(table_, g.table());
        const auto& vars = *table_;
        Polynomial out(table_);
        for (Parity pf : {Parity::even, Parity::odd}) {
            auto fh = f.parity_part(pf);
            if (fh.is_zero()) continue;
            auto right = [&](std::size_t a) { return koszul(vars[a].parity, pf + Parity::odd); };
            for (const auto& pr : pairs_) {
                auto fp = fh.derivative(pr.p), gq = g.derivative(pr.q);
                if (!fp.is_zero() && !gq.is_zero()) out += (fp * gq) * Rational(right(pr.p) * pr.kappa);
                auto fq = fh.derivative(pr.q), gp = g.derivative(pr.p);
                int qp = -koszul(vars[pr.p].parity, vars[pr.q].parity) * pr.kappa;
                if (!fq.is_zero() && !gp.is_zero()) out += (fq * gp) * Rational(right(pr.q) * qp);
            }
        }
        return out;
    }

    /// Explicit bivector view: Pi^{pq} = kappa, Pi^{qp} = -kappa (graded antisymmetric).
    Bivector as_bivector() const {
        Bivector b(table_, Symmetry::antisymmetric);
        for (const auto& pr : pairs_) b.set_entry(pr.p, pr.q, Polynomial::constant(table_, pr.kappa));
        return b;
    }

private:
    TablePtr table_;
    std::vector<Pair> pairs_;
    std::vector<std::optional<std::size_t>> partner_;
};

inline Polynomial poisson_bracket(const StructuralPoisson& p, const Polynomial& f, const Polynomial& g) {
    return p.bracket(f, g);
}

/// X_h = {h, .}: components X_h^v = {h, v} along every paired p/q coordinate.
inline VectorField hamiltonian_vector_field(const StructuralPoisson& p, const Polynomial& h) {
    require_same_table(p.table(), h.table());
    VectorField x(p.table());
    for (const auto& pr : p.pairs()) {
        x.set(pr.q, p.bracket(h, Polynomial::variable(p.table(), pr.q)));
        x.set(pr.p, p.bracket(h, Polynomial::variable(p.table(), pr.p)));
    }
    return x;
}

/// Predicate telling integrate_hamiltonian which (component variable, component monomial) pairs
/// of Y are trustworthy. Untrusted terms neither contribute nor contradict.
using TermFilter = std::function<bool(std::size_t component, const Monomial& term)>;

/// Recover h with hamiltonian_vector_field(p, h) = y. The p/q-free part of h is not determined by y;
/// it is set to `pure_part` (zero by default). Throws InconsistentSystem naming the first pair of
/// coordinates whose mixed partials disagree.
inline Polynomial integrate_hamiltonian(const StructuralPoisson& p, const VectorField& y,
                                        const std::optional<Polynomial>& pure_part = std::nullopt,
                                        const TermFilter& trusted = nullptr) {
    const auto& table = p.table();
    require_same_table(table, y.table());
    const auto& vars = *table;

    // For component v with term c*M', the gradient variable is u = partner(v) and
    //   d_u h = (-1)^{|p|(|h|+1)} Y^v / kappa  (v = q, u = p)
    //   d_u h = -(-1)^{|h||p|} Y^v / kappa     (v = p, u = q)
    struct Candidate {
        std::size_t grad_var;
        Rational value;
    };
    std::map<Monomial, std::vector<Candidate>, MonomialOrder> candidates;

    for (const auto& [v, comp] : y.entries()) {
        if (!vars[v].is_pq())
            throw InconsistentSystem("vector field has a component along non-p/q variable '" + vars[v].name + "'");
        auto u = p.partner(v);
        if (!u) throw InconsistentSystem("component along unpaired variable '" + vars[v].name + "'");
        int kappa = vars[v].kappa;
        for (const auto& [mprime, c] : comp.terms()) {
            if (trusted && !trusted(v, mprime)) continue;
            Monomial::Factor f{static_cast<std::uint32_t>(*u), 1};
            auto [m, sign] = multiply(vars, Monomial::from_sorted({f}), mprime);
            if (sign == 0) throw InconsistentSystem(vars[*u].name, vars[*u].name);
            auto [d, rest] = derive(vars, m, *u);
            Rational grad = c / kappa;
            if (vars[v].kind == VarKind::p) {
                int s = koszul(m.parity(vars), vars[v].parity);
                grad = s > 0 ? Rational(-grad) : grad;
            } else if (koszul(m.parity(vars) + Parity::odd, vars[*u].parity) < 0) {
                grad = -grad;
            }
            // a * d_u(m) = a * d * rest, and rest == mprime
            candidates[m].push_back({*u, grad / d});
        }
    }

    Polynomial h(table);
    for (const auto& [m, cands] : candidates) {
        const Rational& value = cands.front().value;
        for (const auto& c : cands)
            if (c.value != value) throw InconsistentSystem(vars[cands.front().grad_var].name, vars[c.grad_var].name);
        // Every other paired coordinate of m must report the same coefficient.
        for (auto [w, e] : m.factors()) {
            if (!vars[w].is_pq() || !p.partner(w)) continue;
            bool has = false;
            for (const auto& c : cands) has = has || c.grad_var == w;
            if (has) continue;
            auto [d, rest] = derive(vars, m, w);
            if (trusted && !trusted(*p.partner(w), rest)) continue;
            throw InconsistentSystem(vars[cands.front().grad_var].name, vars[w].name);
        }
        h.add_term(m, value);
    }

    if (!trusted) {
        auto check = hamiltonian_vector_field(p, h);
        if (!(check == y)) throw InconsistentSystem("vector field is not Hamiltonian");
    }
    if (pure_part) {
        for (const auto& [m, c] : pure_part->terms())
            for (auto [v, e] : m.factors())
                if (vars[v].is_pq()) throw ValidationError("normalization part must be free of p/q variables");
        h += *pure_part;
    }
    return h;
}

}  // namespace pnrec
