#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pnrec/errors.hpp"

namespace pnrec {

enum class VarKind { t, tau, p, q, novikov };
enum class Parity { even, odd };

inline Parity operator+(Parity a, Parity b) { return a == b ? Parity::even : Parity::odd; }
inline bool is_odd(Parity p) { return p == Parity::odd; }

inline std::string_view to_string(VarKind k) {
    switch (k) {
        case VarKind::t: return "t";
        case VarKind::tau: return "tau";
        case VarKind::p: return "p";
        case VarKind::q: return "q";
        case VarKind::novikov: return "novikov";
    }
    return "?";
}

inline std::string_view to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

inline std::optional<VarKind> parse_kind(std::string_view s) {
    if (s == "t") return VarKind::t;
    if (s == "tau") return VarKind::tau;
    if (s == "p") return VarKind::p;
    if (s == "q") return VarKind::q;
    if (s == "novikov") return VarKind::novikov;
    return std::nullopt;
}

inline std::optional<Parity> parse_parity(std::string_view s) {
    if (s == "even") return Parity::even;
    if (s == "odd") return Parity::odd;
    return std::nullopt;
}

struct Variable {
    std::string name;
    VarKind kind = VarKind::q;
    Parity parity = Parity::even;
    int zgrade = 0;
    /// Orbit multiplicity; meaningful for p/q only.
    int kappa = 1;
    std::optional<int> orbit_index = std::nullopt;
    /// Conley-Zehnder index, carried as metadata only.
    std::optional<int> cz = std::nullopt;

    bool is_pq() const { return kind == VarKind::p || kind == VarKind::q; }
    bool is_time() const { return kind == VarKind::t || kind == VarKind::tau; }

    /// Signed orbit momentum: +k for q_k, -k for p_k, 0 for everything else.
    int momentum() const {
        if (!orbit_index) return 0;
        if (kind == VarKind::q) return *orbit_index;
        if (kind == VarKind::p) return -*orbit_index;
        return 0;
    }

    friend bool operator==(const Variable&, const Variable&) = default;
};

/// Registry of formal variables. Declaration order is the global variable order used
/// for monomial sorting, Koszul signs and canonical printing.
class VariableTable {
public:
    VariableTable() = default;

    std::size_t add(Variable v) {
        if (v.name.empty()) throw ValidationError("variable name must not be empty");
        if (index_.count(v.name)) throw ValidationError("duplicate variable name '" + v.name + "'");
        if (v.is_pq() && v.kappa < 1) throw ValidationError("kappa of '" + v.name + "' must be >= 1");
        if (!v.is_pq()) v.kappa = 1;
        index_.emplace(v.name, vars_.size());
        vars_.push_back(std::move(v));
        return vars_.size() - 1;
    }

    std::size_t size() const noexcept { return vars_.size(); }
    const Variable& operator[](std::size_t i) const { return vars_.at(i); }
    const std::vector<Variable>& variables() const noexcept { return vars_; }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index_of(std::string_view name) const {
        if (auto i = find(name)) return *i;
        throw UnknownVariable(std::string(name));
    }

    bool odd(std::size_t i) const { return vars_[i].parity == Parity::odd; }

    friend bool operator==(const VariableTable& a, const VariableTable& b) { return a.vars_ == b.vars_; }

private:
    std::vector<Variable> vars_;
    std::unordered_map<std::string, std::size_t> index_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

inline bool same_table(const TablePtr& a, const TablePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

inline void require_same_table(const TablePtr& a, const TablePtr& b) {
    if (!same_table(a, b)) throw TableMismatch();
}

}  // namespace pnrec
