#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "pnrec/models/io.hpp"
#include "pnrec/models/s1.hpp"

using namespace pnrec;

namespace {

Polynomial P(const TablePtr& t, std::string_view s) { return parse_expression(s, t); }

std::size_t idx(const Model& m, std::string_view n) { return m.table->index_of(n); }

const char* so3_doc = R"({
  "variables": [
    {"name": "x", "kind": "q", "parity": "even"},
    {"name": "y", "kind": "q", "parity": "even"},
    {"name": "z", "kind": "q", "parity": "even"}
  ],
  "pencil": {
    "P1": [{"a": "x", "b": "y", "expr": "1"}],
    "P2": [{"a": "x", "b": "y", "expr": "z"}, {"a": "y", "b": "z", "expr": "x"}, {"a": "z", "b": "x", "expr": "y"}]
  }
})";

template <class E>
std::string error_of(std::string_view doc) {
    try {
        load_model_text(doc);
    } catch (const E& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(S1ChModel, EndomorphismEntries) {
    auto m = build_s1_ch_model(5);
    const auto& n = *m.endomorphism;
    EXPECT_EQ(n.entry(idx(m, "q2"), idx(m, "q5")), P(m.table, "3/2*q3"));
    EXPECT_TRUE(n.entry(idx(m, "q3"), idx(m, "q2")).is_zero());
    EXPECT_TRUE(n.entry(idx(m, "q3"), idx(m, "q3")).is_zero());
}

TEST(S1ChModel, PrimaryField) {
    auto m = build_s1_ch_model(3);
    EXPECT_EQ(m.primaries.at("1").component("q3"), P(m.table, "3*q3"));
    EXPECT_TRUE(m.table->odd(idx(m, "tau1")));
    EXPECT_THROW(build_s1_ch_model(0), ValidationError);
}

TEST(S1SftModel, OmegaAndBracket) {
    auto m = build_s1_sft_model(5);
    const auto& w = *m.bivector;
    EXPECT_EQ(w.entry(idx(m, "v2"), idx(m, "v3")), P(m.table, "5*v5"));
    EXPECT_TRUE(w.entry(idx(m, "v1"), idx(m, "vm1")).is_zero());
    EXPECT_EQ(w.entry(idx(m, "t1"), idx(m, "vm2")), P(m.table, "-2*vm2"));
    EXPECT_EQ(m.poisson->bracket(P(m.table, "vm1"), P(m.table, "v1")), Polynomial::constant(m.table, 1));
    EXPECT_EQ(m.poisson->bracket(P(m.table, "vm3"), P(m.table, "v3")), Polynomial::constant(m.table, 3));
}

TEST(ClosedForms, Examples) {
    auto ch = build_s1_ch_model(4);
    EXPECT_EQ(s1_closed_forms(ch.table, ClosedFormKind::ch_field, 1, 3), P(ch.table, "3*t1*q3 + 3*q1*q2"));
    for (int k = 1; k <= 4; ++k)
        EXPECT_EQ(s1_closed_forms(ch.table, ClosedFormKind::ch_field, 0, k), P(ch.table, std::to_string(k) + "*q" + std::to_string(k)));
    EXPECT_THROW(s1_closed_forms(ch.table, ClosedFormKind::ch_field, 1, 5), WindowTooSmall);

    auto sft = build_s1_sft_model(3);
    EXPECT_EQ(s1_closed_forms(sft.table, ClosedFormKind::sft_hamiltonian, 0, 3),
              P(sft.table, "1/2*t1^2 + v1*vm1 + v2*vm2 + v3*vm3"));
}

TEST(ClosedForms, LiteralReadingDisagreesWithPrintedCase) {
    auto ch = build_s1_ch_model(4);
    EXPECT_NE(s1::ch_field_literal(ch.table, 1, 3), P(ch.table, "3*t1*q3 + 3*q1*q2"));
    EXPECT_EQ(s1::ch_field_literal(ch.table, 1, 3), P(ch.table, "3*q3"));
}

TEST(ModelIo, RoundTripBuiltins) {
    for (const auto& m : {build_s1_ch_model(4), build_s1_sft_model(3)}) {
        auto doc = serialize_model(m);
        auto back = load_model(doc);
        EXPECT_TRUE(back == m);
        EXPECT_EQ(serialize_model(back), doc);
        EXPECT_EQ(model_fingerprint(back), model_fingerprint(m));
    }
}

TEST(ModelIo, So3PencilDocument) {
    auto m = load_model_text(so3_doc);
    ASSERT_TRUE(m.pencil.has_value());
    EXPECT_TRUE(jacobiator(m.pencil->first() + m.pencil->second()).is_zero());
    EXPECT_TRUE(load_model(serialize_model(m)) == m);
}

TEST(ModelIo, UnpairedP) {
    auto msg = error_of<SchemaError>(R"({"variables": [{"name": "p1", "kind": "p", "parity": "even", "kappa": 1, "orbit_index": 1}]})");
    EXPECT_NE(msg.find("unpaired p-variable"), std::string::npos) << msg;
}

TEST(ModelIo, SchemaErrorsCarryPath) {
    auto msg = error_of<SchemaError>(R"({"variables": [{"name": "x", "kind": "q", "parity": "even", "colour": 1}]})");
    EXPECT_NE(msg.find("/variables/0"), std::string::npos) << msg;
    EXPECT_FALSE(error_of<SchemaError>(R"({"variables": [{"name": "x", "kind": "r", "parity": "even"}]})").empty());
    EXPECT_FALSE(error_of<SchemaError>(R"({"variables": 3})").empty());
    EXPECT_FALSE(error_of<SchemaError>("{ not json").empty());
    EXPECT_FALSE(error_of<SchemaError>(R"({"variables": [], "extra": 1})").empty());
}

TEST(ModelIo, ExpressionErrorsCarryPath) {
    auto msg = error_of<SchemaError>(R"({
      "variables": [{"name": "x", "kind": "q", "parity": "even"}, {"name": "y", "kind": "q", "parity": "even"}],
      "pencil": {"P1": [{"a": "x", "b": "y", "expr": "w"}], "P2": []}
    })");
    EXPECT_NE(msg.find("/pencil/P1/0/expr"), std::string::npos) << msg;
    EXPECT_NE(msg.find("unknown variable 'w'"), std::string::npos) << msg;
}

TEST(ModelIo, IncompatiblePencilRejected) {
    EXPECT_THROW(load_model_text(R"({
      "variables": [{"name": "x", "kind": "q", "parity": "even"}, {"name": "y", "kind": "q", "parity": "even"},
                    {"name": "z", "kind": "q", "parity": "even"}],
      "pencil": {"P1": [{"a": "x", "b": "y", "expr": "1"}],
                 "P2": [{"a": "x", "b": "y", "expr": "z"}, {"a": "y", "b": "z", "expr": "x"}, {"a": "z", "b": "x", "expr": "x"}]}
    })"),
                 Error);
}

TEST(ModelIo, BuiltinNames) {
    EXPECT_TRUE(builtin_model("s1_ch_K8").has_value());
    EXPECT_TRUE(builtin_model("s1_sft_K3").has_value());
    EXPECT_FALSE(builtin_model("s1_ch_Kx").has_value());
    EXPECT_FALSE(builtin_model("torus").has_value());
    EXPECT_THROW(resolve_model("/nonexistent/model.json"), ValidationError);
}

TEST(ModelValidate, GradingChecks) {
    auto m = build_s1_ch_model(3);
    m.grading_checks = true;
    // S^1 gradings are all zero, so a degree -2 check must fail on the nonzero N.
    EXPECT_THROW(validate_model(m), ValidationError);
    m.grading_checks = false;
    EXPECT_NO_THROW(validate_model(m));
}

TEST(ModelValidate, FingerprintSeparatesModels) {
    EXPECT_NE(model_fingerprint(build_s1_ch_model(3)), model_fingerprint(build_s1_ch_model(4)));
    EXPECT_EQ(model_fingerprint(build_s1_ch_model(3)).size(), 16u);
}
