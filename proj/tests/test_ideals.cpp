#include "atr/numfield/ideals.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace atr;

namespace {

// Kronecker symbol (d_F / n) for the discriminant d_F, computed by brute force on odd primes and 2.
int chi(std::int64_t dF, std::int64_t p) {
    if (dF % p == 0) return 0;
    if (p == 2) {
        std::int64_t r = ((dF % 8) + 8) % 8;
        return (r == 1 || r == 7) ? 1 : -1;
    }
    std::int64_t a = ((dF % p) + p) % p;
    for (std::int64_t x = 1; x < p; ++x)
        if (x * x % p == a) return 1;
    return -1;
}

// Number of ideals of norm n is sum over d | n of chi(d).
std::int64_t ideal_count_oracle(std::int64_t dF, std::int64_t n) {
    std::int64_t s = 0;
    for (std::int64_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        std::int64_t c = 1, m = d;
        for (std::int64_t p = 2; p <= m; ++p)
            while (m % p == 0) {
                c *= chi(dF, p);
                m /= p;
            }
        s += c;
    }
    return s;
}

} // namespace

TEST(Ideals, CountsByNormMatchTheZetaFactorisation) {
    for (std::int64_t D : {29, 37, 109}) {
        auto F = make_field(D, 64, -1);
        std::int64_t dF = one_mod_four(D) ? D : 4 * D;
        auto L = enumerate_ideals(F, 600);
        std::map<std::int64_t, std::int64_t> count;
        for (const auto& I : L.ideals) ++count[I.norm];
        for (std::int64_t n = 1; n <= 600; ++n) EXPECT_EQ(count[n], ideal_count_oracle(dF, n)) << "D=" << D << " n=" << n;
    }
}

TEST(Ideals, GeneratorsAreTotallyPositiveWithTheRightNorm) {
    auto F = make_field(29, 64, -1);
    auto L = enumerate_ideals(F, 3000);
    for (const auto& I : L.ideals) {
        FieldElement g = F.elt(I.gen);
        EXPECT_TRUE(F.totally_positive(g));
        EXPECT_EQ(g.norm(), I.norm);
        // balanced: v0(g)/v1(g) lies in [u0^-2, u0^2]
        long double r = F.embed<long double>(g, 0) / F.embed<long double>(g, 1);
        EXPECT_LE(r, F.u0 * F.u0 * (1 + 1e-12L));
        EXPECT_GE(r, 1 / (F.u0 * F.u0) * (1 - 1e-12L));
    }
}

TEST(Ideals, FactorisationReproducesTheGenerator) {
    auto F = make_field(37, 64, -1);
    auto L = enumerate_ideals(F, 2000);
    for (const auto& I : L.ideals) {
        FieldElement prod = F.elt(1);
        std::int64_t nrm = 1;
        for (auto [pi, e] : I.factorization)
            for (int k = 0; k < e; ++k) {
                prod = prod * F.elt(L.primes[pi].gen);
                nrm *= L.primes[pi].norm();
            }
        EXPECT_EQ(nrm, I.norm);
        // same ideal: quotient is a unit
        FieldElement q = prod / F.elt(I.gen);
        EXPECT_TRUE(q.is_integral());
        EXPECT_EQ(boost::multiprecision::abs(q.norm()), 1);
    }
}

TEST(Ideals, SplittingTypesFollowTheLegendreSymbol) {
    auto F = make_field(109, 64, -1);
    for (std::int64_t p : primes_up_to(300)) {
        auto Ps = factor_rational_prime(F, p);
        int c = chi(109, p);
        if (c == 1) {
            ASSERT_EQ(Ps.size(), 2u) << p;
            EXPECT_EQ(Ps[0].norm(), p);
        } else if (c == -1) {
            ASSERT_EQ(Ps.size(), 1u) << p;
            EXPECT_EQ(Ps[0].norm(), p * p);
        } else {
            ASSERT_EQ(Ps.size(), 1u);
            EXPECT_TRUE(Ps[0].ramified);
        }
    }
}
