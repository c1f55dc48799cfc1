#pragma once

#include <map>
#include <optional>
#include <string>

#include "pnrec/poisson/pencil.hpp"
#include "pnrec/poisson/structural.hpp"
#include "pnrec/recursion/ring.hpp"

namespace pnrec {

/// A complete computable instance: variables, window and whichever structures the model declares.
struct Model {
    TablePtr table;
    TruncationWindow window;
    std::optional<StructuralPoisson> poisson = std::nullopt;
    std::optional<Endomorphism11> endomorphism = std::nullopt;
    std::optional<Bivector> bivector = std::nullopt;
    /// Primary fields X_{mu,0} keyed by class name.
    std::map<std::string, VectorField> primaries = {};
    std::optional<CohomologyRing> ring = std::nullopt;
    std::optional<PoissonPencil> pencil = std::nullopt;
    bool grading_checks = false;

    const VariableTable& vars() const { return *table; }
};

namespace detail {

inline int zgrade(const VariableTable& table, const Monomial& m) {
    int g = 0;
    for (auto [v, e] : m.factors()) g += static_cast<int>(e) * table[v].zgrade;
    return g;
}

}  // namespace detail

/// Structural checks on a model: tensors over the model's table, declared symmetries and,
/// with grading_checks, degree -2 homogeneity of N and the bivector.
inline void validate_model(const Model& m) {
    const auto& table = *m.table;
    if (m.endomorphism) {
        require_same_table(m.table, m.endomorphism->table());
        if (m.grading_checks)
            for (const auto& [key, p] : m.endomorphism->entries())
                for (const auto& [mono, c] : p.terms())
                    if (detail::zgrade(table, mono) + table[key.first].zgrade - table[key.second].zgrade != -2)
                        throw ValidationError("endomorphism entry (" + table[key.first].name + ", " +
                                              table[key.second].name + ") is not of degree -2");
    }
    if (m.bivector) {
        require_same_table(m.table, m.bivector->table());
        if (!m.bivector->symmetry_holds()) throw ValidationError("bivector entries violate the declared symmetry");
        if (m.grading_checks)
            for (const auto& [key, p] : m.bivector->entries())
                for (const auto& [mono, c] : p.terms())
                    if (detail::zgrade(table, mono) - table[key.first].zgrade - table[key.second].zgrade != -2)
                        throw ValidationError("bivector entry (" + table[key.first].name + ", " +
                                              table[key.second].name + ") is not of degree -2");
    }
    for (const auto& [name, f] : m.primaries) {
        require_same_table(m.table, f.table());
        if (m.ring) m.ring->index_of(name);
    }
    if (m.ring)
        for (const auto& c : m.ring->basis()) {
            auto v = table.find(c.variable);
            if (v && table[*v].parity != c.parity)
                throw ValidationError("ring variable '" + c.variable + "' has the wrong parity");
        }
}

/// Structural equality of models (tables compared by content).
inline bool operator==(const Model& a, const Model& b) {
    if (!same_table(a.table, b.table) || !(a.window == b.window) || a.grading_checks != b.grading_checks) return false;
    if (a.poisson.has_value() != b.poisson.has_value()) return false;
    if (a.endomorphism != b.endomorphism || a.bivector != b.bivector || a.ring != b.ring) return false;
    if (a.primaries != b.primaries) return false;
    if (a.pencil.has_value() != b.pencil.has_value()) return false;
    if (a.pencil && (!(a.pencil->first() == b.pencil->first()) || !(a.pencil->second() == b.pencil->second())))
        return false;
    return true;
}

}  // namespace pnrec
