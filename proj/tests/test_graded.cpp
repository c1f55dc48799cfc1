#include <gtest/gtest.h>

#include "support.hpp"

using namespace pnrec;
using pnrec::testing::graded_table;

namespace {

Polynomial P(const TablePtr& t, std::string_view s) { return parse_expression(s, t); }

std::vector<Monomial::Factor> raw(const VariableTable& t, std::initializer_list<const char*> names) {
    std::vector<Monomial::Factor> out;
    for (auto n : names) out.emplace_back(static_cast<std::uint32_t>(t.index_of(n)), 1);
    return out;
}

}  // namespace

TEST(Normalize, OddTranspositionGivesMinusSign) {
    auto t = graded_table();
    auto r = raw(*t, {"th2", "th1"});
    auto n = normalize_monomial(*t, r);
    EXPECT_EQ(n.sign, -1);
    EXPECT_EQ(monomial_to_string(*t, n.monomial), "th1*th2");
}

TEST(Normalize, RepeatedOddVanishes) {
    auto t = graded_table();
    auto r = raw(*t, {"th1", "th1"});
    EXPECT_EQ(normalize_monomial(*t, r).sign, 0);
}

TEST(Normalize, EvenMovesCarryNoSign) {
    auto t = graded_table();
    auto r = raw(*t, {"q2", "th1", "q1"});
    auto n = normalize_monomial(*t, r);
    EXPECT_EQ(n.sign, 1);
    EXPECT_EQ(monomial_to_string(*t, n.monomial), "q1*q2*th1");
}

TEST(Multiply, UnitAndKoszul) {
    auto t = graded_table();
    auto f = P(t, "3*q1*th2 - t1");
    EXPECT_EQ(Polynomial::constant(t, 1) * f, f);
    EXPECT_EQ(P(t, "th1") * P(t, "th2"), P(t, "th1*th2"));
    EXPECT_EQ(P(t, "th2") * P(t, "th1"), -P(t, "th1*th2"));
}

TEST(Multiply, MixedParityCrossTermsCancel) {
    auto t = graded_table();
    EXPECT_EQ(P(t, "q1 + th1") * P(t, "q1 - th1"), P(t, "q1^2"));
}

TEST(Derivative, EvenLeibniz) {
    auto t = graded_table();
    EXPECT_EQ(P(t, "q1^2*q2").derivative("q1"), P(t, "2*q1*q2"));
}

TEST(Derivative, LeftConventionOnOddVariables) {
    auto t = graded_table();
    EXPECT_EQ(P(t, "th1*th2").derivative("th1"), P(t, "th2"));
    EXPECT_EQ(P(t, "th1*th2").derivative("th2"), P(t, "-th1"));
}

TEST(Derivative, OfConstantIsZero) {
    auto t = graded_table();
    EXPECT_TRUE(P(t, "7/2").derivative("q1").is_zero());
}

TEST(Truncate, OrbitWindow) {
    auto t = std::make_shared<VariableTable>();
    for (int k = 1; k <= 9; ++k)
        t->add({.name = "q" + std::to_string(k), .kind = VarKind::q, .kappa = k, .orbit_index = k});
    TablePtr tp = t;
    EXPECT_TRUE(P(tp, "q1*q9").truncate({8, std::nullopt}).is_zero());
    EXPECT_EQ(P(tp, "q1*q2").truncate({8, std::nullopt}), P(tp, "q1*q2"));
    EXPECT_EQ(P(tp, "3/2*q3*q5 + q2").truncate({4, std::nullopt}), P(tp, "q2"));
}

TEST(Truncate, DegreeBound) {
    auto t = graded_table();
    EXPECT_EQ(P(t, "q1 + q1*q2 + q1*q2*q3").truncate({8, 2}), P(t, "q1 + q1*q2"));
}

TEST(Parser, RationalCoefficient) {
    auto t = graded_table();
    auto p = P(t, "3/2*q1^2*t1");
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p.terms().begin()->second, make_rational(3, 2));
    EXPECT_EQ(p.to_string(), "3/2*t1*q1^2");
}

TEST(Parser, OddSquareAndKoszul) {
    auto t = graded_table();
    EXPECT_TRUE(P(t, "th1*th1").is_zero());
    EXPECT_EQ(P(t, "th2*th1").to_string(), "-th1*th2");
}

TEST(Parser, Grouping) {
    auto t = graded_table();
    EXPECT_EQ(P(t, "(q1 + q2)^2"), P(t, "q1^2 + 2*q1*q2 + q2^2"));
    EXPECT_EQ(P(t, "-(q1 - 1/3)"), P(t, "1/3 - q1"));
    EXPECT_TRUE(P(t, "0").is_zero());
}

TEST(Parser, Errors) {
    auto t = graded_table();
    EXPECT_THROW(P(t, "q1 +"), ParseError);
    EXPECT_THROW(P(t, "q1 * (q2"), ParseError);
    EXPECT_THROW(P(t, "3/0"), ParseError);
    EXPECT_THROW(P(t, "w7"), UnknownVariable);
}

TEST(Printing, CanonicalOrder) {
    auto t = graded_table();
    EXPECT_EQ(P(t, "q3*q1 + q2 + 1 - q1^2").to_string(), "1+q2-q1^2+q1*q3");
    EXPECT_EQ(Polynomial(t).to_string(), "0");
}

TEST(Polynomial, ZeroIsEmpty) {
    auto t = graded_table();
    auto p = P(t, "q1 - q1");
    EXPECT_TRUE(p.is_zero());
    EXPECT_EQ(p.size(), 0u);
}

TEST(Polynomial, Degree) {
    auto t = graded_table();
    EXPECT_EQ(P(t, "q1 + q2^3*th1").degree(), 4);
}

TEST(Polynomial, TableMismatchThrows) {
    auto a = graded_table();
    auto b = pnrec::testing::xyz_table();
    EXPECT_THROW(Polynomial::variable(a, "q1") + Polynomial::variable(b, "x"), TableMismatch);
}

TEST(Polynomial, RebaseByName) {
    auto a = graded_table();
    auto b = graded_table();
    auto p = P(a, "q1*th2 - t1");
    EXPECT_EQ(p.rebase(b), P(b, "q1*th2 - t1"));
}

TEST(Polynomial, Power) {
    auto t = graded_table();
    EXPECT_EQ(power(P(t, "q1 + 1"), 3), P(t, "q1^3 + 3*q1^2 + 3*q1 + 1"));
    EXPECT_EQ(power(P(t, "q1"), 0), Polynomial::constant(t, 1));
}
