#pragma once

#include <chrono>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnrec/graded/parser.hpp"
#include "pnrec/models/io.hpp"
#include "pnrec/recursion/contact.hpp"
#include "pnrec/recursion/sft.hpp"

namespace pnrec::cli {

enum class Status { pass, fail, skipped };

inline std::string_view to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::skipped: return "skipped";
    }
    return "?";
}

struct Result {
    std::string name;
    Status status = Status::pass;
    std::vector<std::pair<std::string, std::string>> payload;
};

struct Report {
    std::string command;
    std::string fingerprint;
    std::vector<Result> results;
    double seconds = 0;

    bool ok() const {
        for (const auto& r : results)
            if (r.status == Status::fail) return false;
        return true;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["fingerprint"] = fingerprint;
        j["results"] = nlohmann::ordered_json::array();
        for (const auto& r : results) {
            nlohmann::ordered_json p = nlohmann::ordered_json::object();
            for (const auto& [k, v] : r.payload) p[k] = v;
            j["results"].push_back({{"name", r.name}, {"status", std::string(cli::to_string(r.status))}, {"payload", p}});
        }
        j["timing"] = {{"seconds", seconds}};
        return j;
    }

    /// Human-readable form; carries no timing so repeated runs are byte-identical.
    void print_text(std::ostream& out) const {
        out << "command: " << command << "\n";
        out << "fingerprint: " << fingerprint << "\n";
        for (const auto& r : results) {
            out << "[" << cli::to_string(r.status) << "] " << r.name << "\n";
            for (const auto& [k, v] : r.payload) out << "  " << k << " = " << v << "\n";
        }
    }
};

namespace detail {

inline Status status_of(bool ok) { return ok ? Status::pass : Status::fail; }

inline Result field_result(const std::string& name, const VectorField& x, Status status) {
    Result r{name, status, {}};
    const auto& table = *x.table();
    for (const auto& [v, p] : x.entries()) r.payload.emplace_back(table[v].name, p.to_string());
    if (x.is_zero()) r.payload.emplace_back("all", "0");
    return r;
}

inline bool in_orbit_window(const VariableTable& table, const Monomial& m, int window) {
    for (auto [v, e] : m.factors())
        if (table[v].orbit_index && std::abs(*table[v].orbit_index) > window) return false;
    return true;
}

/// Largest window W on which the closed form and the computed level agree in support and every
/// monomial involved is certified exact (0 when even W = 1 fails certification).
inline int certified_window(const SftLevel& level, int n, int max_orbit) {
    const auto& table = level.hamiltonian().table();
    int best = 0;
    for (int w = 1; w <= max_orbit; ++w) {
        auto cf = s1::sft_hamiltonian(table, n, w);
        bool ok = true;
        for (const auto& [m, c] : cf.terms()) ok = ok && level.exact(m);
        for (const auto& [m, c] : level.hamiltonian().terms())
            if (in_orbit_window(*table, m, w)) ok = ok && level.exact(m);
        if (!ok) break;
        best = w;
    }
    return best;
}

inline Polynomial restrict_window(const Polynomial& p, int window) {
    return p.filter([&](const Monomial& m) { return in_orbit_window(*p.table(), m, window); });
}

inline Normalization normalization_rule(const std::string& name, const TablePtr& table) {
    if (name == "zero") return nullptr;
    if (!table->find("t1")) throw ValidationError("constant-curves normalization needs a variable named t1");
    return [table](int n) -> std::optional<Polynomial> { return s1::constant_curve_term(table, n); };
}

inline std::vector<Result> ch_commute_results(const Model& m, int levels) {
    if (!m.endomorphism || m.primaries.empty() || !m.ring)
        throw ValidationError("model lacks an endomorphism, primaries or ring for a contact-homology tower");
    PrimaryFields prim;
    for (const auto& [name, f] : m.primaries) prim.emplace(m.ring->index_of(name), f);
    auto alpha = prim.begin()->first;
    auto tower = ch_tower(*m.endomorphism, prim, *m.ring, alpha, levels);
    auto rep = verify_commuting(tower.levels, m.window.max_orbit);
    std::vector<Result> out;
    for (const auto& p : rep.pairs)
        out.push_back({"[X_" + std::to_string(p.i) + ",X_" + std::to_string(p.j) + "]", status_of(p.residual.is_zero()),
                       {{"residual", p.residual.to_string()}, {"nonzero_terms", std::to_string(p.checked_terms)}}});
    return out;
}

}  // namespace detail

/// Runs one CLI invocation. Returns the process exit code: 0 all checks pass, 1 computation error
/// or failed check, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact graded Poisson / Poisson-Nijenhuis recursions", "pnrec"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "Emit the JSON report");
    app.fallthrough();

    auto* s1 = app.add_subcommand("s1", "Built-in S^1 models");
    s1->require_subcommand(1);
    s1->fallthrough();
    int ch_k = 8, ch_levels = 4;
    bool ch_verify = false;
    auto* s1ch = s1->add_subcommand("ch", "Contact-homology descendants X_{1,n}");
    s1ch->add_option("--max-orbit", ch_k, "Window K")->check(CLI::Range(1, 64));
    s1ch->add_option("--levels", ch_levels, "Highest level n")->check(CLI::Range(0, 32));
    s1ch->add_flag("--verify", ch_verify, "Compare with the closed forms");

    int sft_k = 12, sft_levels = 2, sft_window = 0;
    bool sft_verify = false;
    std::string sft_norm = "constant-curves";
    auto* s1sft = s1->add_subcommand("sft", "Rational SFT Hamiltonians h_{1,n}");
    s1sft->add_option("--max-orbit", sft_k, "Window K")->check(CLI::Range(1, 64));
    s1sft->add_option("--levels", sft_levels, "Highest level n")->check(CLI::Range(0, 16));
    s1sft->add_option("--window", sft_window, "Comparison window W (default: certified window)")
        ->check(CLI::Range(1, 64));
    s1sft->add_option("--normalization", sft_norm, "Pure-t rule")
        ->check(CLI::IsMember({"constant-curves", "zero"}));
    s1sft->add_flag("--verify", sft_verify, "Compare with the closed forms");

    auto* check = app.add_subcommand("check", "Identity checks on a model");
    check->require_subcommand(1);
    check->fallthrough();
    std::string model_name;
    auto* torsion = check->add_subcommand("torsion", "Nijenhuis torsion of N");
    torsion->add_option("--model", model_name, "Model file or builtin name")->required();
    auto* lie = check->add_subcommand("lie", "Lie derivative of N along each primary field");
    lie->add_option("--model", model_name, "Model file or builtin name")->required();
    int commute_levels = 2, commute_window = 3;
    std::string commute_norm = "constant-curves", commute_seed = "t1";
    auto* commute = check->add_subcommand("commute", "Commutativity of a descendant tower");
    commute->add_option("--model", model_name, "Model file or builtin name")->required();
    commute->add_option("--levels", commute_levels, "Highest level n")->check(CLI::Range(0, 16));
    commute->add_option("--window", commute_window, "Certified orbit window W (SFT towers)")->check(CLI::Range(1, 64));
    commute->add_option("--normalization", commute_norm, "Pure-t rule (SFT towers)")
        ->check(CLI::IsMember({"constant-curves", "zero"}));
    commute->add_option("--seed", commute_seed, "Seed h_{-1} (SFT towers)");

    auto* pencil = app.add_subcommand("pencil", "Bihamiltonian pencils");
    pencil->require_subcommand(1);
    pencil->fallthrough();
    std::string pencil_file, seed_text;
    int order = 3, degree = 0;
    bool strict = false;
    auto* expand = pencil->add_subcommand("expand", "Lenard-Magri expansion of a Casimir");
    expand->add_option("--pencil", pencil_file, "Model file with a pencil")->required();
    expand->add_option("--seed", seed_text, "Casimir of P1")->required();
    expand->add_option("--order", order, "Number of coefficients")->check(CLI::Range(0, 64));
    expand->add_option("--degree", degree, "Ansatz degree bound")->check(CLI::Range(1, 64));
    expand->add_flag("--strict", strict, "Fail on kernel freedom instead of choosing");

    auto* model = app.add_subcommand("model", "Model documents");
    model->require_subcommand(1);
    model->fallthrough();
    auto* validate = model->add_subcommand("validate", "Load and validate a model");
    validate->add_option("--model", model_name, "Model file or builtin name")->required();
    auto* print = model->add_subcommand("print", "Print the canonical model document");
    print->add_option("--model", model_name, "Model file or builtin name")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    std::string command = "pnrec";
    for (const auto& a : args) command += " " + a;
    Report report{command, "", {}, 0};
    auto start = std::chrono::steady_clock::now();

    try {
        if (s1ch->parsed()) {
            auto m = build_s1_ch_model(ch_k);
            report.fingerprint = model_fingerprint(m);
            PrimaryFields prim{{0, m.primaries.at("1")}};
            auto tower = ch_tower(*m.endomorphism, prim, *m.ring, 0, ch_levels);
            auto ct = c_table(*m.ring, m.table, 0, ch_levels, true);
            for (int n = 0; n <= ch_levels; ++n) {
                Status st = Status::skipped;
                if (ch_verify) {
                    bool ok = ch_closed_form(*m.endomorphism, prim, ct, n) == tower.levels[n];
                    for (int l = 1; l <= ch_k; ++l)
                        ok = ok && tower.levels[n].component(s1::q_name(l)) == s1::ch_field(m.table, n, l);
                    st = detail::status_of(ok);
                }
                report.results.push_back(detail::field_result("X_1," + std::to_string(n), tower.levels[n], st));
            }
        } else if (s1sft->parsed()) {
            auto m = build_s1_sft_model(sft_k);
            report.fingerprint = model_fingerprint(m);
            auto ctx = std::make_shared<const SftContext>(*m.poisson, *m.bivector);
            auto levels = sft_tower(ctx, Polynomial::variable(m.table, "t1"), sft_levels,
                                    detail::normalization_rule(sft_norm, m.table));
            for (int n = 0; n <= sft_levels; ++n) {
                const auto& level = levels[n + 1];
                int cert = detail::certified_window(level, n, sft_k);
                int w = sft_window ? sft_window : cert;
                Result r{"h_1," + std::to_string(n), Status::skipped, {}};
                r.payload.emplace_back("certified_window", std::to_string(cert));
                if (w < 1) throw WindowTooSmall("no certified window at level " + std::to_string(n));
                if (sft_verify) {
                    if (w > cert) throw WindowTooSmall(sft_k, w);
                    auto cf = s1::sft_hamiltonian(m.table, n, w);
                    auto got = detail::restrict_window(level.hamiltonian(), w);
                    r.status = detail::status_of(got == cf);
                }
                r.payload.emplace_back("window", std::to_string(w));
                r.payload.emplace_back("h", detail::restrict_window(level.hamiltonian(), w).to_string());
                report.results.push_back(std::move(r));
            }
        } else if (torsion->parsed()) {
            auto m = resolve_model(model_name);
            report.fingerprint = model_fingerprint(m);
            if (!m.endomorphism) throw ValidationError("model has no endomorphism");
            auto t = nijenhuis_torsion(*m.endomorphism);
            Result r{"torsion", detail::status_of(t.is_zero()), {}};
            const auto& table = *m.table;
            for (const auto& [key, p] : t.entries())
                r.payload.emplace_back("T^" + table[key[0]].name + "_" + table[key[1]].name + "," + table[key[2]].name,
                                       p.to_string());
            if (t.is_zero()) r.payload.emplace_back("residual", "0");
            report.results.push_back(std::move(r));
        } else if (lie->parsed()) {
            auto m = resolve_model(model_name);
            report.fingerprint = model_fingerprint(m);
            if (!m.endomorphism) throw ValidationError("model has no endomorphism");
            if (m.primaries.empty()) throw ValidationError("model has no primary fields");
            const auto& table = *m.table;
            for (const auto& [name, x] : m.primaries) {
                auto l = lie_derivative_endomorphism(x, *m.endomorphism);
                Result r{"L_X(" + name + ") N", detail::status_of(l.is_zero()), {}};
                for (const auto& [key, p] : l.entries())
                    r.payload.emplace_back(table[key.first].name + "->" + table[key.second].name, p.to_string());
                if (l.is_zero()) r.payload.emplace_back("residual", "0");
                report.results.push_back(std::move(r));
            }
        } else if (commute->parsed()) {
            auto m = resolve_model(model_name);
            report.fingerprint = model_fingerprint(m);
            if (m.bivector && m.bivector->symmetry() == Symmetry::symmetric && m.poisson) {
                auto ctx = std::make_shared<const SftContext>(*m.poisson, *m.bivector);
                auto all = sft_tower(ctx, parse_expression(commute_seed, m.table), commute_levels,
                                     detail::normalization_rule(commute_norm, m.table));
                std::vector<SftLevel> hs(all.begin() + 1, all.end());
                auto rep = verify_commuting(*ctx, hs, commute_window);
                for (const auto& p : rep.pairs)
                    report.results.push_back(
                        {"{h_" + std::to_string(p.i) + ",h_" + std::to_string(p.j) + "}",
                         detail::status_of(p.residual.is_zero() && p.uncertified_terms == 0),
                         {{"window", std::to_string(rep.certified_window)},
                          {"checked_terms", std::to_string(p.checked_terms)},
                          {"uncertified_terms", std::to_string(p.uncertified_terms)},
                          {"residual", p.residual.to_string()}}});
            } else {
                report.results = detail::ch_commute_results(m, commute_levels);
            }
        } else if (expand->parsed()) {
            auto m = resolve_model(pencil_file);
            report.fingerprint = model_fingerprint(m);
            if (!m.pencil) throw ValidationError("model has no pencil");
            auto seed = parse_expression(seed_text, m.table);
            auto tower = casimir_expand(*m.pencil, seed, order, degree ? std::optional<int>(degree) : std::nullopt,
                                        strict ? KernelPolicy::strict : KernelPolicy::canonical);
            Result r{"tower", Status::pass, {{"seed", tower.seed.to_string()}}};
            for (std::size_t i = 0; i < tower.coefficients.size(); ++i)
                r.payload.emplace_back("c" + std::to_string(i), tower.coefficients[i].to_string());
            r.payload.emplace_back("resonance", tower.resonance ? "true" : "false");
            report.results.push_back(std::move(r));
            std::vector<Polynomial> all{tower.seed};
            all.insert(all.end(), tower.coefficients.begin(), tower.coefficients.end());
            bool commuting = true;
            for (std::size_t i = 0; i < all.size(); ++i)
                for (std::size_t j = i + 1; j < all.size(); ++j)
                    commuting = commuting && bivector_bracket(m.pencil->first(), all[i], all[j]).is_zero() &&
                                bivector_bracket(m.pencil->second(), all[i], all[j]).is_zero();
            report.results.push_back({"involution", detail::status_of(commuting), {}});
        } else if (validate->parsed()) {
            auto m = resolve_model(model_name);
            report.fingerprint = model_fingerprint(m);
            Result r{"validate", Status::pass, {{"variables", std::to_string(m.table->size())}}};
            if (m.pencil) r.payload.emplace_back("pencil", "compatible");
            report.results.push_back(std::move(r));
        } else if (print->parsed()) {
            auto m = resolve_model(model_name);
            report.fingerprint = model_fingerprint(m);
            if (!json) {
                out << serialize_model(m).dump(2) << "\n";
                return 0;
            }
            report.results.push_back({"document", Status::pass, {{"model", serialize_model(m).dump()}}});
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (json) out << report.to_json().dump(2) << "\n";
    else report.print_text(out);
    return report.ok() ? 0 : 1;
}

}  // namespace pnrec::cli
