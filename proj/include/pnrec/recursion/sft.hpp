#pragma once

#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "pnrec/poisson/structural.hpp"
#include "pnrec/recursion/contact.hpp"
#include "pnrec/tensor/operations.hpp"

namespace pnrec {

/// Shared data for certifying which coefficients of a truncated omega-recursion are exact.
/// Orbit momentum (q_k -> +k, p_k -> -k, others 0) is conserved by omega and by the bracket,
/// so a missing contribution can only come from a variable whose momentum leaves the window.
class SftContext {
public:
    SftContext(StructuralPoisson p, Bivector omega) : p_(std::move(p)), omega_(std::move(omega)) {
        require_same_table(p_.table(), omega_.table());
        const auto& table = *p_.table();
        for (std::size_t v = 0; v < table.size(); ++v) {
            max_orbit_ = std::max(max_orbit_, std::abs(table[v].momentum()));
            by_momentum_[table[v].momentum()].push_back(v);
        }
        for (const auto& [key, entry] : omega_.entries())
            for (const auto& [m, c] : entry.terms())
                if (momentum(m) != table[key.first].momentum() + table[key.second].momentum())
                    throw ValidationError("omega entry (" + table[key.first].name + ", " + table[key.second].name +
                                          ") does not conserve orbit momentum");
    }

    const StructuralPoisson& poisson() const noexcept { return p_; }
    const Bivector& omega() const noexcept { return omega_; }
    const TablePtr& table() const noexcept { return p_.table(); }
    int max_orbit() const noexcept { return max_orbit_; }

    int momentum(const Monomial& m) const {
        int s = 0;
        for (auto [v, e] : m.factors()) s += static_cast<int>(e) * (*table())[v].momentum();
        return s;
    }

    /// Variables of the given momentum, or nullopt when that momentum lies outside the window.
    std::optional<std::vector<std::size_t>> variables_with_momentum(int m) const {
        if (std::abs(m) > max_orbit_) return std::nullopt;
        auto it = by_momentum_.find(m);
        if (it == by_momentum_.end()) return std::vector<std::size_t>{};
        return it->second;
    }

private:
    StructuralPoisson p_;
    Bivector omega_;
    int max_orbit_ = 0;
    std::map<int, std::vector<std::size_t>> by_momentum_;
};

namespace detail {

/// Every sub-monomial S of m, as exponent vectors aligned with m.factors().
template <class F>
void for_each_divisor(const Monomial& m, F&& f) {
    auto fac = m.factors();
    std::vector<Monomial::Factor> cur;
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == fac.size()) return f(Monomial::from_sorted(cur));
        for (std::uint32_t e = 0; e <= fac[i].second; ++e) {
            if (e > 0) cur.emplace_back(fac[i].first, e);
            bool go = self(self, i + 1);
            if (e > 0) cur.pop_back();
            if (!go) return false;
        }
        return true;
    };
    rec(rec, 0);
}

/// m / s for a divisor s of m.
inline Monomial divide(const Monomial& m, const Monomial& s) {
    std::vector<Monomial::Factor> out;
    for (auto [v, e] : m.factors()) {
        auto r = e - s.exponent(v);
        if (r > 0) out.emplace_back(v, r);
    }
    return Monomial::from_sorted(std::move(out));
}

}  // namespace detail

/// One level h_n of an omega-recursion together with its exactness certificate.
class SftLevel {
public:
    /// A seed level: every coefficient is exact.
    static SftLevel seed(Polynomial h) { return SftLevel(std::move(h), nullptr); }

    const Polynomial& hamiltonian() const noexcept { return h_; }
    bool is_seed() const noexcept { return prev_ == nullptr; }

    /// True when the coefficient of m equals the untruncated recursion's coefficient.
    bool exact(const Monomial& m) const {
        if (!prev_) return true;
        std::lock_guard lock(*mutex_);
        auto it = memo_->find(m);
        if (it != memo_->end()) return it->second;
        const auto& table = *ctx_->table();
        // p/q-free coefficients are fixed by the normalization rule, identically with or without truncation.
        bool ok = true;
        for (auto [u, e] : m.factors())
            if (table[u].is_pq()) ok = false;
        for (auto [u, e] : m.factors()) {
            if (ok) break;
            if (!table[u].is_pq()) continue;
            auto partner = ctx_->poisson().partner(u);
            if (partner && prev_->component_complete(*ctx_, *partner, detail::divide(m, Monomial::single(u)))) {
                ok = true;
                break;
            }
        }
        memo_->emplace(m, ok);
        return ok;
    }

    /// True when the coefficient of `term` in omega(., dh)^v is complete: every contribution
    /// omega^{vb} d_b h lands on in-window variables b and exact coefficients of h.
    bool component_complete(const SftContext& ctx, std::size_t v, const Monomial& term) const {
        const auto& table = *ctx.table();
        int mv = table[v].momentum();
        bool ok = true;
        detail::for_each_divisor(term, [&](const Monomial& s) {
            auto bs = ctx.variables_with_momentum(ctx.momentum(s) - mv);
            if (!bs) return ok = false;
            auto rest = detail::divide(term, s);
            for (auto b : *bs) {
                auto [m, sign] = multiply(table, rest, Monomial::single(b));
                if (sign != 0 && !exact(m)) return ok = false;
            }
            return true;
        });
        return ok;
    }

private:
    friend SftLevel sft_step(const std::shared_ptr<const SftContext>&, const SftLevel&,
                             const std::optional<Polynomial>&);

    SftLevel(Polynomial h, std::shared_ptr<const SftContext> ctx, std::shared_ptr<const SftLevel> prev = nullptr)
        : h_(std::move(h)), ctx_(std::move(ctx)), prev_(std::move(prev)),
          memo_(std::make_shared<std::map<Monomial, bool, MonomialOrder>>()),
          mutex_(std::make_shared<std::mutex>()) {}

    Polynomial h_;
    std::shared_ptr<const SftContext> ctx_;
    std::shared_ptr<const SftLevel> prev_;
    std::shared_ptr<std::map<Monomial, bool, MonomialOrder>> memo_;
    std::shared_ptr<std::mutex> mutex_;
};

/// h_{n+1} from h_n: integrates Y = omega(., dh_n) against the structural bracket using only the
/// certified-complete terms of Y. Components along non-p/q variables (the void t-equations) are dropped.
/// The p/q-free part of the result is `pure_part` (zero by default).
inline SftLevel sft_step(const std::shared_ptr<const SftContext>& ctx, const SftLevel& prev,
                         const std::optional<Polynomial>& pure_part = std::nullopt) {
    const auto& table = ctx->table();
    require_same_table(table, prev.hamiltonian().table());
    auto y = contract_bivector(ctx->omega(), OneForm::differential(prev.hamiltonian()));
    VectorField pq(table);
    for (const auto& [v, comp] : y.entries())
        if ((*table)[v].is_pq()) pq.set(v, comp);
    TermFilter trusted = [&](std::size_t v, const Monomial& term) { return prev.component_complete(*ctx, v, term); };
    auto h = integrate_hamiltonian(ctx->poisson(), pq, pure_part, trusted);
    return SftLevel(std::move(h), ctx, std::make_shared<const SftLevel>(prev));
}

/// p/q-free part assigned to level n (nullopt means zero).
using Normalization = std::function<std::optional<Polynomial>(int level)>;

/// Levels h_{-1} = seed, h_0, ..., h_levels.
inline std::vector<SftLevel> sft_tower(const std::shared_ptr<const SftContext>& ctx, const Polynomial& seed,
                                       int levels, const Normalization& normalization = nullptr) {
    std::vector<SftLevel> out{SftLevel::seed(seed)};
    for (int n = 0; n <= levels; ++n)
        out.push_back(sft_step(ctx, out.back(), normalization ? normalization(n) : std::nullopt));
    return out;
}

/// Pairwise brackets {h_i, h_j} of the given levels restricted to monomials whose orbit indices lie in
/// [-window, window]. Each such monomial is checked for exactness; the report counts the monomials that
/// could not be certified. Requires max_orbit >= F * window, F the largest Hamiltonian degree.
inline CommutingReport verify_commuting(const SftContext& ctx, const std::vector<SftLevel>& levels, int window,
                                        int first_level = 0) {
    const auto& table = *ctx.table();
    int f = 0;
    for (const auto& l : levels) f = std::max(f, l.hamiltonian().degree());
    if (ctx.max_orbit() < f * window) throw WindowTooSmall(ctx.max_orbit(), f * window);

    std::vector<int> mom(levels.size(), 0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        std::optional<int> m;
        for (const auto& [mono, c] : levels[i].hamiltonian().terms()) {
            int mm = ctx.momentum(mono);
            if (m && *m != mm) throw ValidationError("Hamiltonian is not momentum-homogeneous");
            m = mm;
        }
        mom[i] = m.value_or(0);
    }

    auto in_window = [&](const Monomial& r) {
        for (auto [v, e] : r.factors())
            if (table[v].orbit_index && std::abs(*table[v].orbit_index) > window) return false;
        return true;
    };
    // Coefficient of r in {f, g} is exact when every contraction that can produce r uses exact coefficients.
    auto certified = [&](std::size_t i, std::size_t j, const Monomial& r) {
        bool ok = true;
        detail::for_each_divisor(r, [&](const Monomial& a) {
            auto b = detail::divide(r, a);
            auto xs = ctx.variables_with_momentum(mom[i] - ctx.momentum(a));
            if (!xs) return ok = false;
            for (auto x : *xs) {
                auto partner = ctx.poisson().partner(x);
                if (!table[x].is_pq() || !partner) continue;
                auto [fa, s1] = multiply(table, a, Monomial::single(x));
                auto [gb, s2] = multiply(table, b, Monomial::single(*partner));
                if (s1 == 0 || s2 == 0) continue;
                if (!levels[i].exact(fa) || !levels[j].exact(gb)) return ok = false;
            }
            return true;
        });
        return ok;
    };

    // Support of the bracket before cancellation: every monomial some contraction produces.
    auto support = [&](const Polynomial& f, const Polynomial& g) {
        std::set<Monomial, MonomialOrder> out;
        for (const auto& [mf, cf] : f.terms())
            for (auto [x, e] : mf.factors()) {
                auto y = ctx.poisson().partner(x);
                if (!table[x].is_pq() || !y) continue;
                auto af = detail::divide(mf, Monomial::single(x));
                for (const auto& [mg, cg] : g.terms()) {
                    if (!mg.contains(*y)) continue;
                    auto [r, sign] = multiply(table, af, detail::divide(mg, Monomial::single(*y)));
                    if (sign != 0 && in_window(r)) out.insert(r);
                }
            }
        return out;
    };

    CommutingReport report{TowerKind::sft_hamiltonians, window, {}};
    for (std::size_t i = 0; i < levels.size(); ++i)
        for (std::size_t j = i + 1; j < levels.size(); ++j)
            report.pairs.push_back({int(i) + first_level, int(j) + first_level, Polynomial(ctx.table()), 0, 0});
    parallel_for(report.pairs.size(), [&](std::size_t k) {
        auto& r = report.pairs[k];
        std::size_t i = r.i - first_level, j = r.j - first_level;
        const auto& f = levels[i].hamiltonian();
        const auto& g = levels[j].hamiltonian();
        auto br = ctx.poisson().bracket(f, g);
        for (const auto& m : support(f, g)) {
            ++r.checked_terms;
            if (!certified(i, j, m)) ++r.uncertified_terms;
            else r.residual.add_term(m, br.coefficient(m));
        }
    });
    return report;
}

}  // namespace pnrec
