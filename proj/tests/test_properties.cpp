#include <gtest/gtest.h>

#include "pnrec/models/io.hpp"
#include "pnrec/models/s1.hpp"
#include "pnrec/recursion/sft.hpp"
#include "support.hpp"

using namespace pnrec;
using pnrec::testing::Random;

namespace {

constexpr int kCases = 200;

int sign(Parity a, Parity b) { return koszul(a, b); }

Parity parity_of(const Polynomial& f) { return f.parity().value_or(Parity::even); }

Polynomial homogeneous(Random& r, const TablePtr& t, int terms = 3, int degree = 3) {
    return r.homogeneous(t, r.uniform(0, 1) ? Parity::odd : Parity::even, terms, degree);
}

VectorField random_field(Random& r, const TablePtr& t, Parity parity, int terms = 2, int degree = 2) {
    VectorField x(t);
    for (std::size_t v = 0; v < t->size(); ++v) {
        auto want = parity + (*t)[v].parity;  // component parity so that X is homogeneous
        x.set(v, r.homogeneous(t, want, terms, degree));
    }
    return x;
}

Endomorphism11 random_endomorphism(Random& r, const TablePtr& t, int terms = 2, int degree = 2) {
    Endomorphism11 n(t);
    for (std::size_t a = 0; a < t->size(); ++a)
        for (std::size_t b = 0; b < t->size(); ++b)
            if (r.uniform(0, 2) == 0) n.set_entry(a, b, r.polynomial(t, terms, degree));
    return n;
}

VectorField coordinate(const TablePtr& t, std::size_t v) {
    VectorField x(t);
    x.set(v, Polynomial::constant(t, 1));
    return x;
}

}  // namespace

TEST(Property, MultiplicationAssociative) {
    Random r(101);
    auto t = pnrec::testing::graded_table();
    for (int i = 0; i < kCases; ++i) {
        auto f = r.polynomial(t), g = r.polynomial(t), h = r.polynomial(t);
        ASSERT_EQ((f * g) * h, f * (g * h)) << f << " | " << g << " | " << h;
    }
}

TEST(Property, GradedCommutativity) {
    Random r(102);
    auto t = pnrec::testing::graded_table();
    for (int i = 0; i < kCases; ++i) {
        auto f = homogeneous(r, t), g = homogeneous(r, t);
        ASSERT_EQ(f * g, g * f * Rational(sign(parity_of(f), parity_of(g)))) << f << " | " << g;
    }
}

TEST(Property, DerivativeLeibniz) {
    Random r(103);
    auto t = pnrec::testing::graded_table();
    for (int i = 0; i < kCases; ++i) {
        auto f = homogeneous(r, t), g = r.polynomial(t);
        auto v = static_cast<std::size_t>(r.uniform(0, int(t->size()) - 1));
        auto s = sign((*t)[v].parity, parity_of(f));
        ASSERT_EQ((f * g).derivative(v), f.derivative(v) * g + f * g.derivative(v) * Rational(s))
            << f << " | " << g << " d/d" << (*t)[v].name;
    }
}

TEST(Property, DerivativesGradedCommute) {
    Random r(104);
    auto t = pnrec::testing::graded_table();
    for (int i = 0; i < kCases; ++i) {
        auto f = r.polynomial(t, 5, 4);
        auto a = static_cast<std::size_t>(r.uniform(0, int(t->size()) - 1));
        auto b = static_cast<std::size_t>(r.uniform(0, int(t->size()) - 1));
        auto s = sign((*t)[a].parity, (*t)[b].parity);
        ASSERT_EQ(f.derivative(b).derivative(a), f.derivative(a).derivative(b) * Rational(s)) << f;
    }
}

TEST(Property, ParserRoundTrip) {
    Random r(105);
    auto t = pnrec::testing::graded_table();
    for (int i = 0; i < kCases; ++i) {
        auto f = r.polynomial(t, 6, 4);
        ASSERT_EQ(parse_expression(f.to_string(), t), f) << f;
    }
}

TEST(Property, TruncateLinear) {
    Random r(106);
    auto t = pnrec::testing::pq_table(4);
    for (int i = 0; i < kCases; ++i) {
        TruncationWindow w{r.uniform(1, 4), r.uniform(0, 1) ? std::optional<int>(r.uniform(1, 4)) : std::nullopt};
        auto f = r.polynomial(t, 5, 4), g = r.polynomial(t, 5, 4);
        auto c = r.rational();
        ASSERT_EQ((f * Polynomial::constant(t, c) + g).truncate(w), f.truncate(w) * Polynomial::constant(t, c) + g.truncate(w));
    }
}

TEST(Property, BracketAntisymmetry) {
    Random r(107);
    auto t = pnrec::testing::pq_table(2, true);
    auto p = StructuralPoisson::from_table(t);
    for (int i = 0; i < kCases; ++i) {
        auto f = homogeneous(r, t), g = homogeneous(r, t);
        ASSERT_EQ(p.bracket(f, g), p.bracket(g, f) * Rational(-sign(parity_of(f), parity_of(g)))) << f << " | " << g;
    }
}

TEST(Property, BracketLeibniz) {
    Random r(108);
    auto t = pnrec::testing::pq_table(2, true);
    auto p = StructuralPoisson::from_table(t);
    for (int i = 0; i < kCases; ++i) {
        auto f = homogeneous(r, t), g = homogeneous(r, t), h = r.polynomial(t);
        auto s = sign(parity_of(f), parity_of(g));
        ASSERT_EQ(p.bracket(f, g * h), p.bracket(f, g) * h + g * p.bracket(f, h) * Rational(s))
            << f << " | " << g << " | " << h;
    }
}

TEST(Property, BracketJacobi) {
    Random r(109);
    auto t = pnrec::testing::pq_table(2, true);
    auto p = StructuralPoisson::from_table(t);
    for (int i = 0; i < kCases; ++i) {
        auto f = homogeneous(r, t), g = homogeneous(r, t), h = homogeneous(r, t);
        // {f,{g,h}} = {{f,g},h} + (-1)^{|f||g|} {g,{f,h}}
        auto s = sign(parity_of(f), parity_of(g));
        ASSERT_EQ(p.bracket(f, p.bracket(g, h)), p.bracket(p.bracket(f, g), h) + p.bracket(g, p.bracket(f, h)) * Rational(s))
            << f << " | " << g << " | " << h;
    }
}

TEST(Property, LieBracketJacobi) {
    Random r(110);
    auto t = pnrec::testing::graded_table();
    for (int i = 0; i < kCases; ++i) {
        Parity px = r.uniform(0, 1) ? Parity::odd : Parity::even;
        Parity py = r.uniform(0, 1) ? Parity::odd : Parity::even;
        Parity pz = r.uniform(0, 1) ? Parity::odd : Parity::even;
        auto x = random_field(r, t, px, 1), y = random_field(r, t, py, 1), z = random_field(r, t, pz, 1);
        auto s = Polynomial::constant(t, sign(px, py));
        ASSERT_EQ(lie_bracket(x, lie_bracket(y, z)), lie_bracket(lie_bracket(x, y), z) + s * lie_bracket(y, lie_bracket(x, z)));
    }
}

TEST(Property, LieBracketIsCommutatorOfDerivations) {
    Random r(111);
    auto t = pnrec::testing::graded_table();
    for (int i = 0; i < kCases; ++i) {
        Parity px = r.uniform(0, 1) ? Parity::odd : Parity::even;
        Parity py = r.uniform(0, 1) ? Parity::odd : Parity::even;
        auto x = random_field(r, t, px, 1), y = random_field(r, t, py, 1);
        auto f = r.polynomial(t);
        ASSERT_EQ(lie_bracket(x, y)(f), x(y(f)) - y(x(f)) * Rational(sign(px, py))) << f;
    }
}

TEST(Property, LieDerivativeLeibniz) {
    Random r(112);
    auto t = pnrec::testing::xyz_table();
    for (int i = 0; i < kCases; ++i) {
        auto x = random_field(r, t, Parity::even), y = random_field(r, t, Parity::even);
        auto n = random_endomorphism(r, t);
        // L_X(N(Y)) = (L_X N)(Y) + N([X,Y])
        ASSERT_EQ(lie_bracket(x, apply_endomorphism(n, y)),
                  apply_endomorphism(lie_derivative_endomorphism(x, n), y) + apply_endomorphism(n, lie_bracket(x, y)));
    }
}

TEST(Property, TorsionMatchesBracketFormula) {
    Random r(113);
    auto t = pnrec::testing::xyz_table();
    for (int i = 0; i < kCases; ++i) {
        auto n = random_endomorphism(r, t);
        auto torsion = nijenhuis_torsion(n);
        auto x = i % 2 ? random_field(r, t, Parity::even) : coordinate(t, r.uniform(0, 2));
        auto y = i % 2 ? random_field(r, t, Parity::even) : coordinate(t, r.uniform(0, 2));
        auto nx = apply_endomorphism(n, x), ny = apply_endomorphism(n, y);
        auto oracle = lie_bracket(nx, ny) - apply_endomorphism(n, lie_bracket(nx, y)) -
                      apply_endomorphism(n, lie_bracket(x, ny)) +
                      apply_endomorphism(n, apply_endomorphism(n, lie_bracket(x, y)));
        ASSERT_EQ(evaluate(torsion, x, y), oracle);
    }
}

TEST(Property, ModelRoundTrip) {
    Random r(114);
    for (int i = 0; i < kCases; ++i) {
        auto tab = std::make_shared<VariableTable>();
        int k = r.uniform(1, 3);
        tab->add({.name = "t1", .kind = VarKind::t, .zgrade = r.uniform(-2, 2)});
        tab->add({.name = "tau1", .kind = VarKind::tau, .parity = Parity::odd});
        for (int j = 1; j <= k; ++j) {
            tab->add({.name = "p" + std::to_string(j), .kind = VarKind::p, .kappa = j, .orbit_index = j});
            tab->add({.name = "q" + std::to_string(j), .kind = VarKind::q, .kappa = j, .orbit_index = j,
                      .cz = r.uniform(0, 1) ? std::optional<int>(r.uniform(-3, 3)) : std::nullopt});
        }
        TablePtr t = tab;
        Model m{t, TruncationWindow{r.uniform(1, 5), r.uniform(0, 1) ? std::optional<int>(r.uniform(1, 6)) : std::nullopt}};
        m.poisson = StructuralPoisson::from_table(t);
        auto even = even_coordinates(*t);
        if (r.uniform(0, 1)) {
            Endomorphism11 n(t);
            for (auto a : even)
                for (auto b : even)
                    if (r.uniform(0, 2) == 0) n.set_entry(a, b, r.polynomial(t, 2, 2));
            m.endomorphism = n;
        }
        if (r.uniform(0, 1)) {
            Bivector b(t, r.uniform(0, 1) ? Symmetry::symmetric : Symmetry::antisymmetric);
            for (std::size_t a = 0; a < t->size(); ++a)
                for (std::size_t c = a + 1; c < t->size(); ++c)
                    if (r.uniform(0, 2) == 0) b.set_entry(a, c, r.polynomial(t, 2, 2));
            m.bivector = b;
        }
        if (r.uniform(0, 1)) m.primaries.emplace("1", random_field(r, t, Parity::even));
        if (r.uniform(0, 1)) m.ring = circle_cohomology();
        auto doc = serialize_model(m);
        auto back = load_model(doc);
        ASSERT_TRUE(back == m) << doc.dump();
        ASSERT_EQ(serialize_model(back), doc);
    }
}

TEST(Property, IntegrateInvertsHamiltonianField) {
    Random r(115);
    auto t = pnrec::testing::pq_table(3, true);
    auto p = StructuralPoisson::from_table(t);
    for (int i = 0; i < kCases; ++i) {
        auto h = r.polynomial(t, 5, 4);
        auto pure = h.filter([&](const Monomial& m) {
            for (auto [v, e] : m.factors())
                if ((*t)[v].is_pq()) return false;
            return true;
        });
        ASSERT_EQ(integrate_hamiltonian(p, hamiltonian_vector_field(p, h), pure), h) << h;
    }
}

TEST(Property, SingleStepNormalizationOnlyShiftsPureTerms) {
    Random r(116);
    for (int i = 0; i < kCases; ++i) {
        int k = r.uniform(2, 5);
        auto m = build_s1_sft_model(k);
        auto ctx = std::make_shared<const SftContext>(*m.poisson, *m.bivector);
        auto t1 = Polynomial::variable(m.table, "t1");
        // A previous level from a random chain of pure-t choices, then one step under two rules.
        auto prev = SftLevel::seed(t1);
        for (int n = 0, depth = r.uniform(0, 2); n < depth; ++n)
            prev = sft_step(ctx, prev, power(t1, r.uniform(0, 3)) * r.rational());
        auto pure = power(t1, r.uniform(0, 4)) * r.rational();
        auto a = sft_step(ctx, prev).hamiltonian();
        auto b = sft_step(ctx, prev, pure).hamiltonian();
        ASSERT_EQ(b - a, pure);
    }
}
