#include "atr/numfield/ideals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace atr;

namespace {

long double value(std::int64_t D, const FieldElement& x, int sgn) {
    long double r = sgn * std::sqrt(static_cast<long double>(D));
    long double a = x.a().convert_to<long double>(), b = x.b().convert_to<long double>();
    return one_mod_four(D) ? a + b * (1 + r) / 2 : a + b * r;
}

} // namespace

TEST(Field, FundamentalUnitsMatchKnownValues) {
    // (D, trace of eps, |norm| = 1) for the unit (t + s sqrt D)/2 or t + s sqrt D
    struct Case {
        std::int64_t D;
        long double eps;
    };
    for (Case c : {Case{2, 1 + std::sqrt(2.0L)}, Case{5, (1 + std::sqrt(5.0L)) / 2}, Case{13, (3 + std::sqrt(13.0L)) / 2},
                   Case{29, (5 + std::sqrt(29.0L)) / 2}, Case{37, 6 + std::sqrt(37.0L)},
                   Case{109, (261 + 25 * std::sqrt(109.0L)) / 2}}) {
        auto F = make_field(c.D, 64, -1);
        EXPECT_NEAR(F.u0, c.eps, 1e-12L * c.eps) << c.D;
        EXPECT_GT(F.u1, -1);
        EXPECT_LT(F.u1, 0);
        EXPECT_EQ(F.u.norm(), -1);
    }
}

TEST(Field, NormPlusOneUnitIsRejected) {
    try {
        make_field(3);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::no_norm_minus_one_unit);
    }
}

TEST(Field, NonSquarefreeIsRejected) {
    try {
        make_field(12);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::not_squarefree);
    }
}

TEST(Field, ArithmeticAgreesWithEmbeddings) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-40, 40);
    for (std::int64_t D : {2, 29, 37, 109}) {
        auto F = make_field(D, 64, -1);
        for (int it = 0; it < 200; ++it) {
            FieldElement x = F.elt(d(rng), d(rng)), y = F.elt(d(rng), d(rng));
            for (int i = 0; i < 2; ++i) {
                long double vx = F.embed<long double>(x, i), vy = F.embed<long double>(y, i);
                EXPECT_NEAR(F.embed<long double>(x * y, i), vx * vy, 1e-9L * (1 + std::fabs(vx * vy)));
                EXPECT_NEAR(F.embed<long double>(x - y, i), vx - vy, 1e-12L * (1 + std::fabs(vx) + std::fabs(vy)));
                if (!y.is_zero())
                    EXPECT_NEAR(F.embed<long double>(x / y, i), vx / vy, 1e-9L * (1 + std::fabs(vx / vy)));
                EXPECT_NEAR(F.embed<long double>(x, i), value(D, x, F.sgn(i)), 1e-12L * (1 + std::fabs(vx)));
            }
            EXPECT_EQ(x.norm(), (x * x.conj()).a());
            EXPECT_EQ((x * y).norm(), x.norm() * y.norm());
        }
    }
}

TEST(Field, SignOfSurdIsExact) {
    // 99 - 13 sqrt 58 = -0.00505...; 99^2 - 58 * 13^2 = -1
    auto F = make_field_unchecked(58, 64, 1);
    ASSERT_EQ(F.elt(99, -13).norm(), -1);
    EXPECT_EQ(F.embed_sign(F.elt(99, -13), 0), -1);
    EXPECT_EQ(F.embed_sign(F.elt(-99, 13), 0), 1);
    EXPECT_EQ(F.embed_sign(F.elt(99, -13), 1), 1);
}

TEST(Field, DeltaGeneratesTheDifferentAndIsTotallyPositive) {
    for (std::int64_t D : {5, 29, 37, 109, 509}) {
        auto F = make_field(D, 64, -1);
        EXPECT_TRUE(F.totally_positive(F.delta));
        EXPECT_EQ(boost::multiprecision::abs(F.delta.norm()), D);
        EXPECT_TRUE((F.delta / F.sqrt_d()).is_integral());
    }
}
