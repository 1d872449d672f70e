#include "atr/cfrac/expansion.hpp"
#include "atr/cfrac/guided.hpp"
#include "atr/numfield/ideals.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace atr;

namespace {

// (-1)^(k-1)
FieldElement alt_sign(std::int64_t D, std::size_t k) { return FieldElement(D, k % 2 ? 1 : -1); }

} // namespace

TEST(ContinuedFractions, EvaluateMatchesHandComputation) {
    auto F = make_field(29, 64, -1);
    // 2 + 1/(3 + 1/w) = 2 + w/(3w + 1)
    FieldElement w = F.w;
    FieldElement want = F.elt(2) + w / (F.elt(3) * w + F.elt(1));
    EXPECT_EQ(evaluate_cf({F.elt(2), F.elt(3), w}), want);
}

TEST(ContinuedFractions, DivisionRemaindersDecreaseInNorm) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-200, 200);
    for (std::int64_t D : {29, 37, 109, 509}) {
        auto F = make_field(D, 64, -1);
        for (int it = 0; it < 100; ++it) {
            FieldElement a = F.elt(d(rng), d(rng)), b = F.elt(d(rng), d(rng));
            if (b.is_zero()) continue;
            auto ch = two_stage_divisions(a, b, 3, UnitBoxes::when_empty);
            ASSERT_FALSE(ch.empty()) << D << ": " << a.str() << " / " << b.str();
            for (const auto& c : ch) {
                EXPECT_EQ(c.r1, a - c.q1 * b);
                if (c.two_stage) EXPECT_EQ(c.r2, b - c.q2 * c.r1);
                EXPECT_LT(boost::multiprecision::abs(c.remainder().norm()), boost::multiprecision::abs(b.norm()));
            }
        }
    }
}

TEST(ContinuedFractions, ConvergentIdentityOnEnumeratedExpansions) {
    auto F = make_field(37, 64, -1);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> d(-60, 60);
    EnumerationOptions eo;
    eo.max_len = 5;
    eo.max_count = 400;
    for (int it = 0; it < 25; ++it) {
        FieldElement den = F.elt(d(rng), d(rng));
        if (den.is_zero()) continue;
        FieldElement c = F.elt(d(rng), d(rng)) / den;
        std::vector<CFExpansion> all;
        try {
            all = enumerate_expansions(c, eo);
        } catch (const error& e) {
            ASSERT_EQ(e.code(), errc::none_found);
            continue;
        }
        for (const auto& e : all) {
            EXPECT_EQ(evaluate_cf(e.coeffs), c);
            ASSERT_EQ(e.convergents.size(), e.coeffs.size());
            FieldElement pp = F.elt(1), qp = F.elt(0);
            for (std::size_t k = 0; k < e.convergents.size(); ++k) {
                auto [p, q] = e.convergents[k];
                // p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}, counting from k = 0
                EXPECT_EQ(p * qp - pp * q, alt_sign(F.D, k));
                // independent oracle: fold the head from the right as a projective pair
                FieldElement num = e.coeffs[k], den = F.elt(1);
                for (std::size_t j = k; j-- > 0;) {
                    FieldElement t = e.coeffs[j] * num + den;
                    den = num;
                    num = t;
                }
                EXPECT_EQ(p, num);
                EXPECT_EQ(q, den);
                pp = p, qp = q;
            }
        }
    }
}

TEST(ContinuedFractions, CuspChainLinksAdjacentCusps) {
    auto F = make_field(109, 64, -1);
    FieldElement c = F.elt(rational(295, 42), rational(-25, 42));
    auto e = greedy_expansion(c);
    auto chain = cusp_chain(e);
    Cusp prev = std::nullopt;
    for (const auto& g : chain) {
        EXPECT_EQ(g.det(), F.elt(1));
        EXPECT_TRUE(g.is_integral());
        EXPECT_TRUE(cusp_equal(act(g, Cusp(F.elt(0))), prev));
        prev = act(g, Cusp(std::nullopt));
    }
    EXPECT_TRUE(cusp_equal(prev, Cusp(c)));
}

TEST(ContinuedFractions, GreedyIsOneOfTheEnumerated) {
    auto F = make_field(29, 64, -1);
    FieldElement c = F.elt(rational(7, 5), rational(3, 5));
    auto g = greedy_expansion(c);
    EnumerationOptions eo;
    eo.max_len = static_cast<int>(g.coeffs.size());
    eo.max_count = 100000;
    eo.node_budget = 5000000;
    auto all = enumerate_expansions(c, eo);
    bool seen = false;
    for (const auto& e : all) seen = seen || e.coeffs == g.coeffs;
    EXPECT_TRUE(seen);
}

TEST(ContinuedFractions, GuidedExpansionsEvaluateAndKeepLSmall) {
    auto F = make_field(109, 64, -1);
    FieldElement c = F.elt(rational(-64, 5), rational(-13, 5));
    const std::complex<long double> tau0(-0.5L, 0.0163722L), tau3(0, 1);
    GuidedOptions go;
    auto found = guided_expansions<long double>(F, c, tau0, tau3, go);
    ASSERT_FALSE(found.empty());
    for (const auto& e : found) {
        EXPECT_EQ(evaluate_cf(e.coeffs), c);
        FieldElement p0 = F.elt(1), q0 = F.elt(0), p1 = e.coeffs[0], q1 = F.elt(1);
        for (std::size_t k = 1; k < e.coeffs.size(); ++k) {
            FieldElement p2 = e.coeffs[k] * p1 + p0, q2 = e.coeffs[k] * q1 + q0;
            p0 = p1, q0 = q1, p1 = p2, q1 = q2;
            EXPECT_LE(std::abs(F.embed<long double>(q1, 0) * tau0 - F.embed<long double>(p1, 0)), go.max_L);
        }
    }
    // on this cusp the guided search beats norm-greedy division
    EnumerationOptions eo;
    eo.max_len = 6;
    auto best_enum = select_best_expansion<long double>(F, enumerate_expansions(c, eo), tau0, tau3);
    auto best_guided = select_best_expansion<long double>(F, found, tau0, tau3);
    EXPECT_GT(best_guided.eps_min, best_enum.eps_min);
}
