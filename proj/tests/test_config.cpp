#include "atr/cli/pipeline.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace atr;
using namespace atr::cli;

namespace {

RunConfig parse(const std::string& s) {
    std::istringstream in(s);
    return parse_config(in, "test");
}

errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    return errc::invariant_violation;
}

const char* kE29 = R"(
# comment line
[field]
D = 29
[curve]
a1 = 1
a3 = 11+5*w    # trailing comment
[extension]
beta = 3+9*w
[embedding]
M = 0, -1+2*w, 1, w
chain_rule = pinned
chain = 2, -2, 11-3*w, -16-6*w, -4-2*w
[point]
x = -1/3
y = (-(-1/3 + 11 + 5*w) + (7/3 + 4/9*sqrtD)*s)/2
[run]
norm_bound = 1000
threads = 3
)";

} // namespace

TEST(Literals, FieldElementExpressions) {
    auto F = make_field(29, 64, -1);
    EXPECT_EQ(parse_field_element(29, "3+9*w"), F.elt(3, 9));
    EXPECT_EQ(parse_field_element(29, "(1+w)^2"), F.elt(1, 1) * F.elt(1, 1));
    EXPECT_EQ(parse_field_element(29, "sqrtD"), F.sqrt_d());
    EXPECT_EQ(parse_field_element(29, "-1/3 + w/2"), F.elt(rational(-1, 3), rational(1, 2)));
    EXPECT_EQ(parse_field_element(29, "--2"), F.elt(2));
    EXPECT_EQ(code_of([] { parse_field_element(29, "3+"); }), errc::config);
    EXPECT_EQ(code_of([] { parse_field_element(29, "3*v"); }), errc::config);
    EXPECT_EQ(code_of([] { parse_field_element(29, "(1+w"); }), errc::config);
    EXPECT_EQ(code_of([] { parse_field_element(29, "w^-1"); }), errc::config);
}

TEST(Literals, ExtensionLiteralSquaresToBeta) {
    auto F = make_field(29, 64, -1);
    FieldElement beta = F.elt(3, 9);
    hp_complex s = eval_k_literal(F, beta, "s");
    hp_complex b(F.embed<hp_real>(beta, 0));
    EXPECT_LT(abs(s * s - b), hp_real("1e-40"));
    EXPECT_GT(s.imag(), 0);
    EXPECT_LT(abs(eval_k_literal(F, beta, "s^2 - 3 - 9*w")), hp_real("1e-40"));
}

TEST(ConfigFile, ParsesAllSections) {
    auto c = parse(kE29);
    EXPECT_EQ(c.D, 29);
    EXPECT_EQ(c.curve[2], "11+5*w");
    ASSERT_EQ(c.embeddings.size(), 1u);
    EXPECT_EQ(c.embeddings[0].chain_rule, "pinned");
    EXPECT_EQ(c.embeddings[0].chain.size(), 5u);
    EXPECT_EQ(c.embeddings[0].M[1], "-1+2*w");
    EXPECT_EQ(*c.norm_bound, 1000);
    EXPECT_EQ(c.threads, 3);
    EXPECT_EQ(c.v0_sqrtD_sign, -1);
}

TEST(ConfigFile, ResolvesToAConsistentProblem) {
    auto p = resolve(parse(kE29));
    EXPECT_EQ(p.F.D, 29);
    ASSERT_TRUE(p.point.has_value());
    ASSERT_EQ(p.embeddings.size(), 1u);
    EXPECT_EQ(p.options[0].rule, ChainRule::pinned);
    EXPECT_EQ(evaluate_cf(p.options[0].pinned), gamma_cusp(p.embeddings[0].gamma_phi));
}

TEST(ConfigFile, Rejections) {
    EXPECT_EQ(code_of([] { parse("[field]\nD = 29\n[nowhere]\n"); }), errc::config);
    EXPECT_EQ(code_of([] { parse("D = 29\n"); }), errc::config);
    EXPECT_EQ(code_of([] { parse("[field]\nD = 29\nE = 3\n"); }), errc::config);
    EXPECT_EQ(code_of([] { parse("[curve]\na1 = 1\n"); }), errc::config);
    EXPECT_EQ(code_of([] { parse("[field]\nD = 2.5\n"); }), errc::config);
    EXPECT_EQ(code_of([] { parse("[field]\nD = 29\n[run]\nsplit = maybe\n"); }), errc::config);
    EXPECT_EQ(code_of([] { parse("[field]\nD = 29\n[run]\neps0_factor = 1.2\n"); }), errc::config);
    EXPECT_EQ(code_of([] { parse("[field]\nD = 29\n[embedding]\nM = 0, 1, 1\n"); }), errc::config);
    EXPECT_EQ(code_of([] { parse("[field]\nD = 29\n[embedding]\nM = 0,1,1,0\nchain_rule = pinned\n"); }), errc::config);
    EXPECT_EQ(code_of([] { parse("[field]\nD = 29\n[point]\nx = 1\n"); }), errc::config);
}

TEST(ConfigFile, MissingFileIsAConfigError) { EXPECT_EQ(code_of([] { load_config("/nonexistent/x.cfg"); }), errc::config); }

TEST(ConfigFile, PointOffTheCurveIsRejected) {
    std::string s = kE29;
    s.replace(s.find("x = -1/3"), 8, "x = -1/2");
    EXPECT_EQ(code_of([&] { resolve(parse(s)); }), errc::point_not_on_curve);
}

TEST(ExitCodes, DistinctPerFailureClass) {
    EXPECT_EQ(exit_code_for(error(errc::config, "")), exit_config);
    EXPECT_EQ(exit_code_for(error(errc::corrupt_cache, "")), exit_cache);
    EXPECT_EQ(exit_code_for(error(errc::precision_loss, "")), exit_precision);
    EXPECT_EQ(exit_code_for(error(errc::bad_reduction, "")), exit_config);
    EXPECT_EQ(exit_code_for(error(errc::no_collision, "")), exit_runtime);
    std::set<int> codes{exit_ok, exit_runtime, exit_config, exit_cache, exit_precision, exit_verification};
    EXPECT_EQ(codes.size(), 6u);
}
