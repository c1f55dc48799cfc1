#include <gtest/gtest.h>

#include "pnrec/models/io.hpp"
#include "pnrec/models/s1.hpp"
#include "support.hpp"

using namespace pnrec;
using pnrec::testing::pq_table;
using pnrec::testing::xyz_table;

namespace {

Polynomial P(const TablePtr& t, std::string_view s) { return parse_expression(s, t); }

Bivector lie_poisson(const TablePtr& t, const char* zx = "y") {
    Bivector b(t, Symmetry::antisymmetric);
    b.set_entry(0, 1, P(t, "z"));
    b.set_entry(1, 2, P(t, "x"));
    b.set_entry(2, 0, P(t, zx));
    return b;
}

Bivector constant_xy(const TablePtr& t) {
    Bivector b(t, Symmetry::antisymmetric);
    b.set_entry(0, 1, Polynomial::constant(t, 1));
    return b;
}

}  // namespace

TEST(StructuralBracket, CanonicalPairs) {
    auto t = pq_table(3);
    StructuralPoisson p = StructuralPoisson::from_table(t);
    for (int k = 1; k <= 3; ++k) {
        auto pk = P(t, "p" + std::to_string(k)), qk = P(t, "q" + std::to_string(k));
        EXPECT_EQ(p.bracket(pk, qk), Polynomial::constant(t, k));
        EXPECT_EQ(p.bracket(qk, pk), Polynomial::constant(t, -k));
    }
    EXPECT_TRUE(p.bracket(P(t, "q1"), P(t, "q2")).is_zero());
    EXPECT_TRUE(p.bracket(P(t, "t1"), P(t, "p1")).is_zero());
    EXPECT_EQ(p.bracket(P(t, "p1"), P(t, "q1^2")), P(t, "2*q1"));
}

TEST(StructuralBracket, UnpairedVariableRejected) {
    auto t = std::make_shared<VariableTable>();
    t->add({.name = "p1", .kind = VarKind::p, .kappa = 1, .orbit_index = 1});
    EXPECT_THROW(StructuralPoisson::from_table(t), ValidationError);
}

TEST(StructuralBracket, AsBivectorAgrees) {
    auto t = pq_table(2);
    auto p = StructuralPoisson::from_table(t);
    auto b = p.as_bivector();
    auto f = P(t, "p1*q2^2 + t1*q1"), g = P(t, "p2*p1 - q1^3");
    EXPECT_EQ(bivector_bracket(b, f, g), p.bracket(f, g));
}

TEST(HamiltonianField, ConstantAndEuler) {
    auto t = pq_table(1);
    auto p = StructuralPoisson::from_table(t);
    EXPECT_TRUE(hamiltonian_vector_field(p, P(t, "5/7")).is_zero());
    auto x = hamiltonian_vector_field(p, P(t, "p1*q1"));
    EXPECT_EQ(x.component("q1"), P(t, "q1"));
    EXPECT_EQ(x.component("p1"), P(t, "-p1"));
}

TEST(HamiltonianField, S1FirstLevel) {
    auto m = build_s1_sft_model(5);
    auto h0 = s1::sft_hamiltonian(m.table, 0, 5);
    auto x = hamiltonian_vector_field(*m.poisson, h0);
    for (int l = -5; l <= 5; ++l) {
        if (l == 0) continue;
        EXPECT_EQ(x.component(s1::v_name(l)), P(m.table, std::to_string(l) + "*" + s1::v_name(l)));
    }
}

TEST(Integrate, ZeroAndDirectExample) {
    auto t = pq_table(1);
    auto p = StructuralPoisson::from_table(t);
    EXPECT_TRUE(integrate_hamiltonian(p, VectorField(t)).is_zero());
    VectorField y(t);
    y.set(t->index_of("p1"), P(t, "q1"));
    EXPECT_EQ(integrate_hamiltonian(p, y), P(t, "-1/2*q1^2"));
    EXPECT_EQ(integrate_hamiltonian(p, y, P(t, "t1^2")), P(t, "t1^2 - 1/2*q1^2"));
}

TEST(Integrate, S1FromDt) {
    auto m = build_s1_sft_model(6);
    VectorField y(m.table);
    for (int l = -6; l <= 6; ++l)
        if (l != 0) y.set(m.table->index_of(s1::v_name(l)), P(m.table, std::to_string(l) + "*" + s1::v_name(l)));
    auto h = integrate_hamiltonian(*m.poisson, y);
    EXPECT_EQ(h, s1::sft_hamiltonian(m.table, 0, 6) - P(m.table, "1/2*t1^2"));
}

TEST(Integrate, InconsistentFieldThrows) {
    auto t = pq_table(2);
    auto p = StructuralPoisson::from_table(t);
    VectorField y(t);
    y.set(t->index_of("q1"), P(t, "q2"));  // dh/dp1 = q2
    y.set(t->index_of("p2"), P(t, "q1"));  // dh/dq2 = -q1/2, but d/dq2 of the first gives p1
    EXPECT_THROW(integrate_hamiltonian(p, y), InconsistentSystem);
}

TEST(Jacobiator, ConstantAndLiePoisson) {
    auto t = xyz_table();
    EXPECT_TRUE(jacobiator(constant_xy(t)).is_zero());
    EXPECT_TRUE(jacobiator(lie_poisson(t)).is_zero());
    EXPECT_FALSE(jacobiator(lie_poisson(t, "x")).is_zero());
}

TEST(Pencil, ValidatesStructures) {
    auto t = xyz_table();
    EXPECT_NO_THROW(PoissonPencil(constant_xy(t), lie_poisson(t)));
    EXPECT_THROW(PoissonPencil(constant_xy(t), lie_poisson(t, "x")), ValidationError);
}

TEST(CasimirExpand, So3PlusConstant) {
    auto t = xyz_table();
    PoissonPencil pencil(constant_xy(t), lie_poisson(t));
    auto tower = casimir_expand(pencil, P(t, "z"), 3);
    ASSERT_EQ(tower.coefficients.size(), 3u);
    EXPECT_EQ(tower.coefficients[0], P(t, "-1/2*(x^2 + y^2 + z^2)"));
    EXPECT_TRUE(tower.coefficients[1].is_zero());
    EXPECT_TRUE(tower.coefficients[2].is_zero());
    EXPECT_FALSE(tower.resonance);
    // x^2+y^2+z^2 - 2 lambda z is a Casimir of P2 - lambda P1, order by order in lambda.
    auto c = P(t, "x^2 + y^2 + z^2");
    for (const char* v : {"x", "y", "z"}) {
        auto f = P(t, v);
        EXPECT_TRUE(bivector_bracket(pencil.second(), c, f).is_zero());
        EXPECT_TRUE((bivector_bracket(pencil.first(), c, f) + bivector_bracket(pencil.second(), P(t, "2*z"), f)).is_zero());
        EXPECT_TRUE(bivector_bracket(pencil.first(), P(t, "z"), f).is_zero());
    }
}

TEST(CasimirExpand, DegenerateResonance) {
    auto t = xyz_table();
    PoissonPencil pencil(lie_poisson(t), lie_poisson(t));
    auto tower = casimir_expand(pencil, P(t, "x^2 + y^2 + z^2"), 2);
    EXPECT_TRUE(tower.resonance);
    for (const auto& c : tower.coefficients) EXPECT_TRUE(c.is_zero()) << c;
}

TEST(CasimirExpand, Errors) {
    auto t = xyz_table();
    PoissonPencil pencil(constant_xy(t), lie_poisson(t));
    EXPECT_THROW(casimir_expand(pencil, P(t, "x"), 2), SeedNotCasimir);
    EXPECT_THROW(casimir_expand(pencil, P(t, "z"), 2, 1), NoSolutionWithinDegree);
    PoissonPencil degenerate(lie_poisson(t), lie_poisson(t));
    EXPECT_THROW(casimir_expand(degenerate, P(t, "x^2 + y^2 + z^2"), 2, std::nullopt, KernelPolicy::strict),
                 AmbiguousSolution);
}

TEST(CasimirExpand, ZeroOrder) {
    auto t = xyz_table();
    PoissonPencil pencil(constant_xy(t), lie_poisson(t));
    auto tower = casimir_expand(pencil, P(t, "z"), 0);
    EXPECT_TRUE(tower.coefficients.empty());
    EXPECT_EQ(tower.seed, P(t, "z"));
}

TEST(LinearSolve, ParticularAndKernel) {
    std::vector<std::vector<Rational>> a{{1, 2, 0}, {0, 0, 1}};
    std::vector<Rational> b{3, 4};
    auto s = solve_linear(a, b, 3);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->particular, (std::vector<Rational>{3, 0, 4}));
    ASSERT_EQ(s->kernel.size(), 1u);
    EXPECT_EQ(s->kernel[0], (std::vector<Rational>{-2, 1, 0}));
    EXPECT_FALSE(solve_linear({{1, 1}, {2, 2}}, {1, 3}, 2));
}
