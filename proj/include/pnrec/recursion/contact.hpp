#pragma once

#include <map>
#include <vector>

#include "pnrec/recursion/parallel.hpp"
#include "pnrec/recursion/ring.hpp"
#include "pnrec/tensor/operations.hpp"

namespace pnrec {

/// C^mu entries keyed by class index.
using CoefficientMap = std::map<std::size_t, Polynomial>;
/// Primary fields X_{mu,0} keyed by class index.
using PrimaryFields = std::map<std::size_t, VectorField>;

namespace detail {

inline VectorField primary_combination(const CoefficientMap& c, const PrimaryFields& primaries,
                                       const TablePtr& table) {
    VectorField out(table);
    for (const auto& [mu, coeff] : c) {
        if (coeff.is_zero()) continue;
        auto it = primaries.find(mu);
        if (it == primaries.end())
            throw ValidationError("missing primary field for class " + std::to_string(mu));
        out = out + coeff * it->second;
    }
    return out;
}

}  // namespace detail

/// X_{alpha,n} = N(X_{alpha,n-1}) + C^mu_{alpha,n-1} X_{mu,0}.
inline VectorField ch_step(const Endomorphism11& n, const VectorField& x_prev, const CoefficientMap& c,
                           const PrimaryFields& primaries) {
    require_same_table(n.table(), x_prev.table());
    return apply_endomorphism(n, x_prev) + detail::primary_combination(c, primaries, n.table());
}

/// X_{alpha,n} = sum_{k=0}^{n} C^mu_{alpha,n-k-1} N^k(X_{mu,0}); c_table[j] holds C_{alpha,j-1}.
inline VectorField ch_closed_form(const Endomorphism11& n, const PrimaryFields& primaries,
                                  const std::vector<CoefficientMap>& c_table, int level) {
    if (level < 0) throw ValidationError("ch_closed_form needs level >= 0");
    if (c_table.size() < static_cast<std::size_t>(level) + 1)
        throw ValidationError("coefficient table shorter than the requested level");
    VectorField out(n.table());
    // N^k applied to each primary, built up incrementally.
    PrimaryFields powers = primaries;
    for (int k = 0; k <= level; ++k) {
        out = out + detail::primary_combination(c_table[level - k], powers, n.table());
        for (auto& [mu, f] : powers) f = apply_endomorphism(n, f);
    }
    return out;
}

enum class TowerKind { ch_vector_fields, sft_hamiltonians };

inline std::string_view to_string(TowerKind k) {
    return k == TowerKind::ch_vector_fields ? "CH-vector-fields" : "SFT-hamiltonians";
}

/// Contact-homology descendants X_{alpha,0}, X_{alpha,1}, ... of one class.
struct ChTower {
    std::size_t alpha = 0;
    std::vector<VectorField> levels;
};

/// C-coefficient table c[j] = C_{alpha,j-1} for j = 0..levels.
inline std::vector<CoefficientMap> c_table(const CohomologyRing& ring, const TablePtr& table, std::size_t alpha,
                                           int levels, bool tau_zero) {
    std::vector<CoefficientMap> c;
    for (int j = 0; j <= levels; ++j) c.push_back(c_coefficients(ring, table, j - 1, alpha, tau_zero));
    return c;
}

/// Iterates ch_step from the primary X_{alpha,0} up to X_{alpha,levels}.
inline ChTower ch_tower(const Endomorphism11& n, const PrimaryFields& primaries, const CohomologyRing& ring,
                        std::size_t alpha, int levels, bool tau_zero = true) {
    auto it = primaries.find(alpha);
    if (it == primaries.end()) throw ValidationError("missing primary field for class " + std::to_string(alpha));
    ChTower tower{alpha, {it->second}};
    for (int k = 1; k <= levels; ++k)
        tower.levels.push_back(ch_step(n, tower.levels.back(), c_coefficients(ring, n.table(), k - 1, alpha, tau_zero),
                                       primaries));
    return tower;
}

/// D = 2 - sum p d_p - sum q d_q - sum t d_t, with tau-variables counted as t-type.
inline Polynomial euler_operator(const Polynomial& f) {
    const auto& table = *f.table();
    Polynomial out(f.table());
    for (const auto& [m, c] : f.terms()) {
        long weight = 2;
        for (auto [v, e] : m.factors())
            if (table[v].kind != VarKind::novikov) weight -= e;
        if (weight != 0) out.add_term(m, c * weight);
    }
    return out;
}

struct BracketResidual {
    int i = 0;
    int j = 0;
    Polynomial residual;  // for vector fields: the first nonzero component
    std::size_t checked_terms = 0;
    std::size_t uncertified_terms = 0;
};

struct CommutingReport {
    TowerKind kind = TowerKind::ch_vector_fields;
    /// Largest orbit index on which every checked coefficient is certified exact.
    int certified_window = 0;
    std::vector<BracketResidual> pairs;

    bool commuting() const {
        for (const auto& p : pairs)
            if (!p.residual.is_zero() || p.uncertified_terms != 0) return false;
        return true;
    }
};

/// All pairwise Lie brackets [X_i, X_j], i < j. The N-recursion only raises orbit indices, so
/// every component computed on a window is exact there; the certified window is the model's.
inline CommutingReport verify_commuting(const std::vector<VectorField>& fields, int window) {
    CommutingReport report{TowerKind::ch_vector_fields, window, {}};
    std::vector<std::pair<int, int>> jobs;
    for (std::size_t i = 0; i < fields.size(); ++i)
        for (std::size_t j = i + 1; j < fields.size(); ++j) jobs.emplace_back(int(i), int(j));
    for (auto [i, j] : jobs) report.pairs.push_back({i, j, Polynomial(fields[i].table()), 0, 0});
    parallel_for(jobs.size(), [&](std::size_t k) {
        auto& r = report.pairs[k];
        auto br = lie_bracket(fields[r.i], fields[r.j]);
        for (const auto& [comp, p] : br.entries()) {
            r.checked_terms += p.size();
            if (r.residual.is_zero()) r.residual = p;
        }
    });
    return report;
}

}  // namespace pnrec
