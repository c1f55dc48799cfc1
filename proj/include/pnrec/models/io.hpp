#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pnrec/graded/parser.hpp"
#include "pnrec/models/s1.hpp"

namespace pnrec {

using Json = nlohmann::json;

namespace detail {

class SchemaReader {
public:
    explicit SchemaReader(std::string path = "") : path_(std::move(path)) {}

    SchemaReader at(const std::string& key) const { return SchemaReader(path_ + "/" + key); }
    SchemaReader at(std::size_t i) const { return SchemaReader(path_ + "/" + std::to_string(i)); }
    const std::string& path() const { return path_; }
    std::string where() const { return path_.empty() ? "/" : path_; }

    [[noreturn]] void fail(const std::string& what) const { throw SchemaError(where(), what); }

    void require_object(const Json& j, std::initializer_list<const char*> allowed,
                        std::initializer_list<const char*> required = {}) const {
        if (!j.is_object()) fail("expected an object");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [k, v] : j.items())
            if (!ok.count(k)) at(k).fail("unknown key");
        for (const char* r : required)
            if (!j.contains(r)) at(r).fail("missing required key");
    }

    const Json& array(const Json& j) const {
        if (!j.is_array()) fail("expected an array");
        return j;
    }

    std::string string(const Json& j) const {
        if (!j.is_string()) fail("expected a string");
        return j.get<std::string>();
    }

    int integer(const Json& j) const {
        if (!j.is_number_integer()) fail("expected an integer");
        return j.get<int>();
    }

    bool boolean(const Json& j) const {
        if (!j.is_boolean()) fail("expected a boolean");
        return j.get<bool>();
    }

    Rational rational(const Json& j) const {
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (!j.is_string()) fail("expected a rational (integer or \"a/b\" string)");
        try {
            Rational r(j.get<std::string>());
            r.canonicalize();
            return r;
        } catch (const std::invalid_argument&) {
            fail("malformed rational");
        }
    }

private:
    std::string path_;
};

inline Polynomial parse_at(const SchemaReader& r, const Json& j, const TablePtr& table) {
    auto text = r.string(j);
    try {
        return parse_expression(text, table);
    } catch (const Error& e) {
        r.fail(e.what());
    }
}

inline std::size_t variable_at(const SchemaReader& r, const Json& j, const TablePtr& table) {
    auto name = r.string(j);
    auto idx = table->find(name);
    if (!idx) r.fail("unknown variable '" + name + "'");
    return *idx;
}

inline Bivector read_bivector_entries(const SchemaReader& r, const Json& entries, const TablePtr& table,
                                      Symmetry sym) {
    Bivector b(table, sym);
    const auto& arr = r.array(entries);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        auto e = r.at(i);
        e.require_object(arr[i], {"a", "b", "expr"}, {"a", "b", "expr"});
        auto a = variable_at(e.at("a"), arr[i]["a"], table);
        auto bb = variable_at(e.at("b"), arr[i]["b"], table);
        auto p = parse_at(e.at("expr"), arr[i]["expr"], table);
        if (a == bb && b.swap_sign(a, a) < 0 && !p.is_zero())
            e.fail("diagonal entry of an antisymmetric bivector must vanish");
        if (auto* prev = b.find({a, bb}); prev && !(*prev == p)) e.fail("entry contradicts the declared symmetry");
        b.set_entry(a, bb, p);
    }
    return b;
}

}  // namespace detail

/// Parse and validate a model document.
inline Model load_model(const Json& doc) {
    detail::SchemaReader root;
    root.require_object(doc, {"variables", "window", "endomorphism", "bivector", "primaries", "ring", "pencil", "flags"},
                        {"variables"});

    auto table = std::make_shared<VariableTable>();
    auto rv = root.at("variables");
    const auto& vars = rv.array(doc["variables"]);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto r = rv.at(i);
        const auto& j = vars[i];
        r.require_object(j, {"name", "kind", "parity", "zgrade", "kappa", "orbit_index", "cz"}, {"name", "kind", "parity"});
        Variable v;
        v.name = r.at("name").string(j["name"]);
        auto kind = parse_kind(r.at("kind").string(j["kind"]));
        if (!kind) r.at("kind").fail("expected one of t, tau, p, q, novikov");
        v.kind = *kind;
        auto parity = parse_parity(r.at("parity").string(j["parity"]));
        if (!parity) r.at("parity").fail("expected even or odd");
        v.parity = *parity;
        if (j.contains("zgrade")) v.zgrade = r.at("zgrade").integer(j["zgrade"]);
        if (j.contains("kappa")) {
            if (!v.is_pq()) r.at("kappa").fail("kappa is only allowed for p/q variables");
            v.kappa = r.at("kappa").integer(j["kappa"]);
        }
        if (j.contains("orbit_index")) v.orbit_index = r.at("orbit_index").integer(j["orbit_index"]);
        if (j.contains("cz")) v.cz = r.at("cz").integer(j["cz"]);
        try {
            table->add(std::move(v));
        } catch (const ValidationError& e) {
            r.fail(e.what());
        }
    }
    TablePtr tp = table;

    Model m{tp, TruncationWindow{1, std::nullopt}};
    int k_max = 1;
    for (const auto& v : tp->variables())
        if (v.orbit_index) k_max = std::max(k_max, std::abs(*v.orbit_index));
    m.window.max_orbit = k_max;
    if (doc.contains("window")) {
        auto r = root.at("window");
        r.require_object(doc["window"], {"max_orbit", "max_degree"}, {"max_orbit"});
        m.window.max_orbit = r.at("max_orbit").integer(doc["window"]["max_orbit"]);
        if (m.window.max_orbit < 1) r.at("max_orbit").fail("must be positive");
        if (doc["window"].contains("max_degree")) {
            m.window.max_degree = r.at("max_degree").integer(doc["window"]["max_degree"]);
            if (*m.window.max_degree < 1) r.at("max_degree").fail("must be positive");
        }
    }

    try {
        m.poisson = StructuralPoisson::from_table(tp);
    } catch (const ValidationError& e) {
        root.at("variables").fail(e.what());
    }

    if (doc.contains("endomorphism")) {
        auto r = root.at("endomorphism");
        const auto& arr = r.array(doc["endomorphism"]);
        Endomorphism11 n(tp);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto e = r.at(i);
            e.require_object(arr[i], {"lower", "upper", "expr"}, {"lower", "upper", "expr"});
            auto lower = detail::variable_at(e.at("lower"), arr[i]["lower"], tp);
            auto upper = detail::variable_at(e.at("upper"), arr[i]["upper"], tp);
            if (n.find({lower, upper})) e.fail("duplicate endomorphism entry");
            n.set_entry(lower, upper, detail::parse_at(e.at("expr"), arr[i]["expr"], tp));
        }
        m.endomorphism = std::move(n);
    }

    if (doc.contains("bivector")) {
        auto r = root.at("bivector");
        const auto& j = doc["bivector"];
        r.require_object(j, {"symmetry", "entries"}, {"symmetry", "entries"});
        auto s = r.at("symmetry").string(j["symmetry"]);
        Symmetry sym;
        if (s == "symmetric") sym = Symmetry::symmetric;
        else if (s == "antisymmetric") sym = Symmetry::antisymmetric;
        else r.at("symmetry").fail("expected symmetric or antisymmetric");
        m.bivector = detail::read_bivector_entries(r.at("entries"), j["entries"], tp, sym);
    }

    if (doc.contains("primaries")) {
        auto r = root.at("primaries");
        const auto& j = doc["primaries"];
        if (!j.is_object()) r.fail("expected an object");
        for (const auto& [cls, comps] : j.items()) {
            auto rc = r.at(cls);
            const auto& arr = rc.array(comps);
            VectorField f(tp);
            for (std::size_t i = 0; i < arr.size(); ++i) {
                auto e = rc.at(i);
                e.require_object(arr[i], {"var", "expr"}, {"var", "expr"});
                auto v = detail::variable_at(e.at("var"), arr[i]["var"], tp);
                if (f.find(v)) e.fail("duplicate component");
                f.set(v, detail::parse_at(e.at("expr"), arr[i]["expr"], tp));
            }
            m.primaries.emplace(cls, std::move(f));
        }
    }

    if (doc.contains("ring")) {
        auto r = root.at("ring");
        const auto& j = doc["ring"];
        r.require_object(j, {"basis", "degrees", "parities", "variables", "products", "integral", "eta"},
                         {"basis", "degrees", "parities", "variables", "products", "integral", "eta"});
        const auto& basis = r.at("basis").array(j["basis"]);
        const std::size_t n = basis.size();
        auto sized = [&](const char* key) -> const Json& {
            const auto& a = r.at(key).array(j[key]);
            if (a.size() != n) r.at(key).fail("length differs from basis");
            return a;
        };
        const auto& degrees = sized("degrees");
        const auto& parities = sized("parities");
        const auto& variables = sized("variables");
        std::vector<CohomologyRing::Class> classes;
        for (std::size_t i = 0; i < n; ++i) {
            CohomologyRing::Class c;
            c.name = r.at("basis").at(i).string(basis[i]);
            c.degree = r.at("degrees").at(i).integer(degrees[i]);
            auto par = parse_parity(r.at("parities").at(i).string(parities[i]));
            if (!par) r.at("parities").at(i).fail("expected even or odd");
            c.parity = *par;
            c.variable = r.at("variables").at(i).string(variables[i]);
            if (!tp->find(c.variable)) r.at("variables").at(i).fail("unknown variable '" + c.variable + "'");
            classes.push_back(std::move(c));
        }
        auto class_at = [&](const detail::SchemaReader& rr, const Json& v) {
            auto name = rr.string(v);
            for (std::size_t i = 0; i < n; ++i)
                if (classes[i].name == name) return i;
            rr.fail("unknown class '" + name + "'");
        };
        CohomologyRing::Products prod(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
        auto rp = r.at("products");
        const auto& parr = rp.array(j["products"]);
        for (std::size_t i = 0; i < parr.size(); ++i) {
            auto e = rp.at(i);
            e.require_object(parr[i], {"a", "b", "c", "coeff"}, {"a", "b", "c", "coeff"});
            prod[class_at(e.at("a"), parr[i]["a"])][class_at(e.at("b"), parr[i]["b"])]
                [class_at(e.at("c"), parr[i]["c"])] = e.at("coeff").rational(parr[i]["coeff"]);
        }
        std::vector<Rational> integral(n, Rational(0));
        auto ri = r.at("integral");
        if (!j["integral"].is_object()) ri.fail("expected an object");
        for (const auto& [cls, v] : j["integral"].items())
            integral[class_at(ri, Json(cls))] = ri.at(cls).rational(v);
        const auto& eta_j = sized("eta");
        std::vector<std::vector<Rational>> eta(n, std::vector<Rational>(n));
        for (std::size_t a = 0; a < n; ++a) {
            auto ra = r.at("eta").at(a);
            const auto& row = ra.array(eta_j[a]);
            if (row.size() != n) ra.fail("length differs from basis");
            for (std::size_t b = 0; b < n; ++b) eta[a][b] = ra.at(b).rational(row[b]);
        }
        try {
            m.ring.emplace(std::move(classes), std::move(prod), std::move(integral), std::move(eta));
        } catch (const ValidationError& e) {
            r.fail(e.what());
        }
    }

    if (doc.contains("pencil")) {
        auto r = root.at("pencil");
        const auto& j = doc["pencil"];
        r.require_object(j, {"P1", "P2"}, {"P1", "P2"});
        auto p1 = detail::read_bivector_entries(r.at("P1"), j["P1"], tp, Symmetry::antisymmetric);
        auto p2 = detail::read_bivector_entries(r.at("P2"), j["P2"], tp, Symmetry::antisymmetric);
        try {
            m.pencil.emplace(std::move(p1), std::move(p2));
        } catch (const ValidationError& e) {
            r.fail(e.what());
        }
    }

    if (doc.contains("flags")) {
        auto r = root.at("flags");
        r.require_object(doc["flags"], {"grading_checks"});
        if (doc["flags"].contains("grading_checks"))
            m.grading_checks = r.at("grading_checks").boolean(doc["flags"]["grading_checks"]);
    }

    validate_model(m);
    return m;
}

inline Model load_model_text(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError("/", std::string("malformed JSON: ") + e.what());
    }
    return load_model(doc);
}

namespace detail {

inline Json rational_json(const Rational& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p()) return r.get_num().get_si();
    return r.get_str();
}

/// Canonical entry list: each unordered pair once, lower table index first.
inline Json bivector_entries_json(const Bivector& b) {
    Json out = Json::array();
    const auto& table = *b.table();
    for (const auto& [key, p] : b.entries()) {
        if (key.first > key.second) continue;
        out.push_back({{"a", table[key.first].name}, {"b", table[key.second].name}, {"expr", p.to_string()}});
    }
    return out;
}

}  // namespace detail

/// Canonical document for a model; load_model(serialize_model(m)) == m.
inline Json serialize_model(const Model& m) {
    const auto& table = *m.table;
    Json doc;
    Json vars = Json::array();
    for (const auto& v : table.variables()) {
        Json j{{"name", v.name}, {"kind", std::string(to_string(v.kind))}, {"parity", std::string(to_string(v.parity))}};
        if (v.zgrade != 0) j["zgrade"] = v.zgrade;
        if (v.is_pq()) j["kappa"] = v.kappa;
        if (v.orbit_index) j["orbit_index"] = *v.orbit_index;
        if (v.cz) j["cz"] = *v.cz;
        vars.push_back(std::move(j));
    }
    doc["variables"] = std::move(vars);
    doc["window"] = {{"max_orbit", m.window.max_orbit}};
    if (m.window.max_degree) doc["window"]["max_degree"] = *m.window.max_degree;
    if (m.endomorphism) {
        Json arr = Json::array();
        for (const auto& [key, p] : m.endomorphism->entries())
            arr.push_back({{"lower", table[key.first].name}, {"upper", table[key.second].name}, {"expr", p.to_string()}});
        doc["endomorphism"] = std::move(arr);
    }
    if (m.bivector)
        doc["bivector"] = {{"symmetry", std::string(to_string(m.bivector->symmetry()))},
                           {"entries", detail::bivector_entries_json(*m.bivector)}};
    if (!m.primaries.empty()) {
        Json prim = Json::object();
        for (const auto& [cls, f] : m.primaries) {
            Json arr = Json::array();
            for (const auto& [v, p] : f.entries()) arr.push_back({{"var", table[v].name}, {"expr", p.to_string()}});
            prim[cls] = std::move(arr);
        }
        doc["primaries"] = std::move(prim);
    }
    if (m.ring) {
        const auto& ring = *m.ring;
        Json basis = Json::array(), degrees = Json::array(), parities = Json::array(), variables = Json::array();
        for (const auto& c : ring.basis()) {
            basis.push_back(c.name);
            degrees.push_back(c.degree);
            parities.push_back(std::string(to_string(c.parity)));
            variables.push_back(c.variable);
        }
        Json products = Json::array();
        const auto n = ring.dimension();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (ring.products()[a][b][c] != 0)
                        products.push_back({{"a", ring.basis()[a].name},
                                            {"b", ring.basis()[b].name},
                                            {"c", ring.basis()[c].name},
                                            {"coeff", detail::rational_json(ring.products()[a][b][c])}});
        Json integral = Json::object();
        for (std::size_t a = 0; a < n; ++a)
            if (ring.integral()[a] != 0) integral[ring.basis()[a].name] = detail::rational_json(ring.integral()[a]);
        Json eta = Json::array();
        for (const auto& row : ring.eta()) {
            Json r = Json::array();
            for (const auto& x : row) r.push_back(detail::rational_json(x));
            eta.push_back(std::move(r));
        }
        doc["ring"] = {{"basis", basis},         {"degrees", degrees},   {"parities", parities},
                       {"variables", variables}, {"products", products}, {"integral", integral},
                       {"eta", eta}};
    }
    if (m.pencil)
        doc["pencil"] = {{"P1", detail::bivector_entries_json(m.pencil->first())},
                         {"P2", detail::bivector_entries_json(m.pencil->second())}};
    doc["flags"] = {{"grading_checks", m.grading_checks}};
    return doc;
}

/// FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
inline std::string model_fingerprint(const Model& m) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : serialize_model(m).dump()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

/// Builtin names `s1_ch_K<k>` and `s1_sft_K<k>`, or a path to a model document.
inline std::optional<Model> builtin_model(std::string_view name) {
    auto parse_k = [&](std::string_view prefix) -> std::optional<int> {
        if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
        auto rest = name.substr(prefix.size());
        if (rest.empty() || rest.size() > 4) return std::nullopt;
        int k = 0;
        for (char c : rest) {
            if (c < '0' || c > '9') return std::nullopt;
            k = k * 10 + (c - '0');
        }
        return k;
    };
    if (auto k = parse_k("s1_ch_K")) return build_s1_ch_model(*k);
    if (auto k = parse_k("s1_sft_K")) return build_s1_sft_model(*k);
    return std::nullopt;
}

inline Model resolve_model(const std::string& source) {
    if (auto m = builtin_model(source)) return std::move(*m);
    std::ifstream in(source);
    if (!in) throw ValidationError("cannot open model '" + source + "' (not a file or builtin name)");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model_text(ss.str());
}

}  // namespace pnrec
