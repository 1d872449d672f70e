#include "atr/numfield/bezout.hpp"
#include "atr/numfield/ideals.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace atr;

namespace {

bool divides(const FieldElement& g, const FieldElement& x) { return x.is_zero() || (x / g).is_integral(); }

} // namespace

TEST(Bezout, IdentityHoldsExactlyOnRandomPairs) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-300, 300);
    for (std::int64_t D : {29, 37, 109, 509}) {
        auto F = make_field(D, 64, -1);
        for (int it = 0; it < 80; ++it) {
            FieldElement a = F.elt(d(rng), d(rng)), b = F.elt(d(rng), d(rng));
            if (a.is_zero() && b.is_zero()) continue;
            auto r = bezout(a, b);
            EXPECT_EQ(r.s * a + r.t * b, r.g) << a.str() << ", " << b.str();
            EXPECT_TRUE(r.s.is_integral() && r.t.is_integral());
            // g generates (a, b): it divides both, and it is a combination of both
            EXPECT_TRUE(divides(r.g, a) && divides(r.g, b));
        }
    }
}

TEST(Bezout, CoprimeNormsGiveOne) {
    auto F = make_field(109, 64, -1);
    // norms -7 and 3 are coprime, so the ideal (a, b) is the unit ideal
    FieldElement a = F.elt(4, 1), b = F.elt(5, 1);
    ASSERT_EQ(boost::multiprecision::gcd(numerator(a.norm()), numerator(b.norm())), 1);
    auto r = bezout(a, b);
    EXPECT_EQ(r.g, F.elt(1));
    EXPECT_EQ(r.s * a + r.t * b, F.elt(1));
}

TEST(Bezout, GcdOfPrimeAndItsMultiple) {
    auto F = make_field(29, 64, -1);
    auto P = factor_rational_prime(F, 5).front();
    FieldElement p = F.elt(P.gen);
    FieldElement a = p * F.elt(7, 3), b = p * F.elt(-2, 5);
    auto r = bezout(a, b);
    using boost::multiprecision::abs;
    EXPECT_TRUE((r.g / p).is_integral());
    EXPECT_EQ(abs(r.g.norm()), abs(p.norm()) * abs(bezout(F.elt(7, 3), F.elt(-2, 5)).g.norm()));
    EXPECT_EQ(r.s * a + r.t * b, r.g);
}

TEST(Bezout, RejectsZeroPair) {
    auto F = make_field(29, 64, -1);
    EXPECT_THROW(bezout(F.elt(0), F.elt(0)), error);
}
