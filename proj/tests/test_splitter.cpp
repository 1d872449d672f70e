#include "atr/hmfint/integrate.hpp"
#include "atr/splitter/split.hpp"
#include "curves.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace atr;
using namespace atr::testing;
using R = long double;
using C = std::complex<R>;

TEST(Hyperbolic, DistanceMatchesTheCoshFormula) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<R> re(-3, 3), im(0.01L, 4);
    for (int i = 0; i < 200; ++i) {
        C x(re(rng), im(rng)), y(re(rng), im(rng));
        R c = 1 + std::norm(x - y) / (2 * x.imag() * y.imag());
        EXPECT_NEAR(hyperbolic_distance<R>(x, y), std::acosh(c), 1e-12L * (1 + std::acosh(c)));
    }
}

TEST(Hyperbolic, GeodesicPointSplitsTheDistance) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<R> re(-3, 3), im(0.01L, 4), t(0, 1);
    for (int i = 0; i < 200; ++i) {
        C x(re(rng), im(rng)), y(re(rng), im(rng));
        R lo = std::min(x.imag(), y.imag()), h = lo + t(rng) * (std::max(x.imag(), y.imag()) - lo);
        C p = geodesic_point_at_height<R>(x, y, h);
        EXPECT_NEAR(p.imag(), h, 1e-12L * (1 + h));
        R d = hyperbolic_distance<R>(x, y);
        EXPECT_NEAR(hyperbolic_distance<R>(x, p) + hyperbolic_distance<R>(p, y), d, 1e-9L * (1 + d));
    }
}

TEST(Hyperbolic, HeightAboveTheArcIsRefused) {
    EXPECT_THROW(geodesic_point_at_height<R>(C(0, 1), C(2, 1), 3.0L), error);
}

TEST(Geometry, ConstantsAgreeWithPublishedApproximations) {
    struct Case {
        std::int64_t D;
        R C_F, eps_F;
    };
    for (Case c : {Case{29, 5, 0.0736L}, Case{37, 6, 0.044L}, Case{109, 10.4L, 0.006L}, Case{509, 22.5L, 0.0015L}}) {
        auto g = geometry(make_field(c.D, 64, -1));
        EXPECT_NEAR(g.C_F, c.C_F, 0.10L * c.C_F) << c.D;
        EXPECT_NEAR(g.eps_F_gl, c.eps_F, 0.15L * c.eps_F) << c.D;
        // C_F = |w0 - w1| = sqrt(D) for D = 1 mod 4
        EXPECT_NEAR(g.C_F, std::sqrt(static_cast<R>(c.D)), 1e-12L);
    }
}

TEST(Freitag, PostconditionsOnRandomInputs) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<R> x(-50, 50), dl(0.05L, 0.9L);
    for (std::int64_t D : {29, 37, 109, 509}) {
        auto F = make_field(D, 64, -1);
        auto g = geometry(F);
        for (int i = 0; i < 100; ++i) {
            R x0 = x(rng), x1 = x(rng), delta = dl(rng);
            auto r = freitag_pair(F, x0, x1, delta);
            ASSERT_FALSE(r.c.a == 0 && r.c.b == 0);
            R c0 = F.embed<R>(r.c, 0), c1 = F.embed<R>(r.c, 1);
            EXPECT_LE(std::fabs(c0 * x0 + F.embed<R>(r.d, 0)), delta * (1 + 1e-12L));
            EXPECT_LE(std::fabs(c1 * x1 + F.embed<R>(r.d, 1)), delta * (1 + 1e-12L));
            EXPECT_LE(std::max(std::fabs(c0), std::fabs(c1)), g.C_F / delta * (1 + 1e-12L));
        }
    }
}

TEST(GoodDomain, ReductionReachesHeightProductEpsF) {
    auto F = make_field(37, 64, -1);
    auto g = geometry(F);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<R> re(-2, 2), lim(-6, 0);
    for (int i = 0; i < 100; ++i) {
        C z0(re(rng), std::pow(10.0L, lim(rng))), z1(re(rng), std::pow(10.0L, lim(rng)));
        Mat2 m = reduce_to_good_domain<R>(F, z0, z1, Group::GLtilde);
        EXPECT_TRUE(m.is_integral());
        auto a = act_uhp(embed<R>(F, m, 0), z0), b = act_uhp(embed<R>(F, m, 1), z1);
        EXPECT_GE(a.imag() * b.imag(), g.eps_F_gl * g.eps_F_gl * (1 - 1e-9L));
    }
}

TEST(Split, SumsArePreservedAndEveryPartIsGood) {
    auto c = e29();
    auto geo = geometry(c.F);
    auto cfg = make_split_config(geo);
    IdealList L;
    // long enough for the unsplit regions too
    std::int64_t N = tail_norm_bound(c.F, 0.3L * geo.eps_F_gl, 1e-12L);
    auto t = build_table(c.F, c.E, N, 4, &L);
    auto T = make_integration_table<R>(c.F, t, L);
    IntegrationOptions o;
    o.tol = 1e-12;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<R> re(-1, 1), hi(0.6L, 1.5L), fr(0.3L, 0.8L);
    for (int i = 0; i < 8; ++i) {
        // a thin region: one outer limit low enough that eps sits in [0.3, 0.8) eps_F, below eps0
        R e = fr(rng) * geo.eps_F_gl;
        R h1 = hi(rng);
        Region<R> r{Limit<R>(C(re(rng), e * e / h1)), Limit<R>(C(re(rng), hi(rng))), Limit<R>(C(re(rng), h1)),
                    Limit<R>(C(re(rng), hi(rng) + h1))};
        ASSERT_LT(epsilon(r), cfg.eps0);
        auto parts = split_integral(c.F, r, cfg);
        C sum = 0;
        for (const auto& p : parts) {
            EXPECT_GE(epsilon(p), R(cfg.eps0) * (1 - 1e-12L));
            sum += integrate_wf_plus(T, p, o).value;
        }
        C whole = integrate_wf_plus(T, r, o).value;
        EXPECT_LT(std::abs(sum - whole), 1e-9L) << "region " << i << ": " << parts.size() << " parts";
    }
}
