#include "atr/hmfint/integrate.hpp"
#include "atr/splitter/split.hpp"
#include "curves.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace atr;
using namespace atr::testing;
using R = long double;
using C = std::complex<R>;

namespace {

struct Fixture {
    Named c = e29();
    IdealList L;
    CoeffTable t;
    IntegrationTable<R> T;
    explicit Fixture(std::int64_t N) {
        t = build_table(c.F, c.E, N, 2, &L);
        T = make_integration_table<R>(c.F, t, L);
    }
};

Fixture& fixture() {
    static Fixture f(6000);
    return f;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton's method.
void gauss_legendre(int n, std::vector<R>& x, std::vector<R>& w) {
    x.resize(n);
    w.resize(n);
    const R pi_ = pi<R>();
    for (int i = 0; i < n; ++i) {
        R z = std::cos(pi_ * (i + 0.75L) / (n + 0.5L)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            R p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                R p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1, p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            R dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        x[i] = z;
        w[i] = 2 / ((1 - z * z) * dp * dp);
    }
}

// f(tau0, tau1) = sum over totally positive n of a_(n) e(n0 tau0/delta0 + n1 tau1/delta1).
C f_value(const Fixture& fx, C t0, C t1) {
    const auto& F = fx.c.F;
    R d0 = F.embed<R>(F.delta, 0), d1 = F.embed<R>(F.delta, 1);
    C s = 0;
    for (std::size_t i = 0; i < fx.L.ideals.size(); ++i) {
        if (fx.t.coeffs[i] == 0) continue;
        R g0 = F.embed<R>(F.elt(fx.L.ideals[i].gen), 0) / d0, g1 = F.embed<R>(F.elt(fx.L.ideals[i].gen), 1) / d1;
        for (int k = -12; k <= 12; ++k) {
            R q = std::pow(F.u0, 2 * k);
            C ph = two_pi<R>() * C(0, 1) * (g0 * q * t0 + g1 / q * t1);
            if (ph.real() < -80) continue;
            s += R(fx.t.coeffs[i]) * std::exp(ph);
        }
    }
    return s;
}

// int_{x0}^{y0} int_{x1}^{y1} omega_f along straight segments.
C quadrature(const Fixture& fx, C x0, C y0, C x1, C y1, int n = 40) {
    std::vector<R> x, w;
    gauss_legendre(n, x, w);
    C h0 = (y0 - x0) / R(2), h1 = (y1 - x1) / R(2), m0 = (y0 + x0) / R(2), m1 = (y1 + x1) / R(2);
    C s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += w[i] * w[j] * f_value(fx, m0 + h0 * x[i], m1 + h1 * x[j]);
    C twopii(0, two_pi<R>());
    return twopii * twopii / std::sqrt(R(fx.c.F.D)) * s * h0 * h1;
}

Region<R> reg(C x0, C y0, C x1, C y1) { return {Limit<R>(x0), Limit<R>(y0), Limit<R>(x1), Limit<R>(y1)}; }

} // namespace

TEST(Integrate, ClosedFormAgreesWithQuadratureOfTheForm) {
    auto& fx = fixture();
    C x0(-0.3L, 0.9L), y0(0.4L, 1.1L), x1(0.2L, 0.8L), y1(-0.1L, 1.2L);
    IntegrationOptions o;
    o.tol = 1e-15;
    auto v = integrate_wf(fx.T, reg(x0, y0, x1, y1), o);
    C q = quadrature(fx, x0, y0, x1, y1);
    EXPECT_LT(std::abs(v.value - q), 1e-13L * (1 + std::abs(q))) << v.value << " vs " << q;
}

TEST(Integrate, ReflectionConjugates) {
    auto& fx = fixture();
    IntegrationOptions o;
    o.tol = 1e-15;
    auto r = reg(C(0.1L, 0.7L), C(1.3L, 1.5L), C(-0.4L, 0.9L), C(0.3L, 2.0L));
    auto a = integrate_wf(fx.T, r, o).value, b = integrate_wf(fx.T, reflect(r), o).value;
    EXPECT_LT(std::abs(b - std::conj(a)), 1e-15L);
}

TEST(Integrate, TranslationByIntegersOfF) {
    auto& fx = fixture();
    const auto& F = fx.c.F;
    IntegrationOptions o;
    o.tol = 1e-15;
    auto r = reg(C(0.1L, 0.7L), C(0.9L, 0.8L), C(-0.4L, 0.9L), C(0.3L, 1.4L));
    for (auto b : {F.elt(1), F.w, F.elt(-2, 3)}) {
        R b0 = F.embed<R>(b, 0), b1 = F.embed<R>(b, 1);
        auto s = r;
        s.x0 = Limit<R>(r.x0.z + b0), s.y0 = Limit<R>(r.y0.z + b0);
        s.x1 = Limit<R>(r.x1.z + b1), s.y1 = Limit<R>(r.y1.z + b1);
        EXPECT_LT(std::abs(integrate_wf(fx.T, s, o).value - integrate_wf(fx.T, r, o).value), 1e-14L);
    }
}

TEST(Integrate, PlusFormIsInvariantUnderGLtilde) {
    auto& fx = fixture();
    const auto& F = fx.c.F;
    IntegrationOptions o;
    o.tol = 1e-15;
    o.strict = false;
    auto r = reg(C(0.1L, 1.1L), C(0.5L, 1.3L), C(-0.2L, 0.9L), C(0.4L, 1.2L));
    Mat2 S{F.elt(0), F.elt(-1), F.elt(1), F.elt(0)};
    Mat2 U{F.u, F.elt(0), F.elt(0), F.elt(1)};
    Mat2 T{F.elt(1), F.w, F.elt(0), F.elt(1)};
    auto base = integrate_wf_plus(fx.T, r, o).value;
    for (const Mat2& g : {S, U, T}) {
        auto gr = act_region(F, g, r);
        ASSERT_GT(epsilon(gr), 0.3L);
        EXPECT_LT(std::abs(integrate_wf_plus(fx.T, gr, o).value - base), 1e-12L) << g.a.str();
    }
}

TEST(Integrate, InfiniteLimitsAreHandled) {
    auto& fx = fixture();
    IntegrationOptions o;
    o.tol = 1e-15;
    // int_{x0}^{y0} int_{x1}^{i oo} = limit of a tall finite region; the gap decays like
    // exp(-4 pi sqrt(0.9 H N(nu))), so H has to be in the thousands for 1e-14
    Region<R> r{Limit<R>(C(0.1L, 0.9L)), Limit<R>(C(0.6L, 1.0L)), Limit<R>(C(0.2L, 1.0L)), Limit<R>::infinity()};
    auto tall = reg(C(0.1L, 0.9L), C(0.6L, 1.0L), C(0.2L, 1.0L), C(0.2L, 3000.0L));
    EXPECT_LT(std::abs(integrate_wf(fx.T, r, o).value - integrate_wf(fx.T, tall, o).value), 1e-14L);
}

TEST(Integrate, ShortTableIsRefused) {
    auto& fx = fixture();
    IntegrationOptions o;
    o.tol = 1e-14;
    auto thin = reg(C(0.1L, 0.03L), C(0.6L, 1.0L), C(0.2L, 0.05L), C(0.3L, 1.0L));
    try {
        integrate_wf(fx.T, thin, o);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::insufficient_table);
    }
}

TEST(Integrate, TailBoundsDecreaseWithEpsilon) {
    auto F = make_field(37, 64, -1);
    std::int64_t prev = std::numeric_limits<std::int64_t>::max();
    for (R eps : {0.01L, 0.03L, 0.1L, 0.3L}) {
        std::int64_t N = tail_norm_bound(F, eps, 1e-12L);
        EXPECT_LT(N, prev);
        EXPECT_LT(orbit_majorant(F, eps, static_cast<R>(N)), 1e-12L);
        prev = N;
    }
}
