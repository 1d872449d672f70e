#pragma once

#include "atr/numfield/ideals.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <vector>

namespace atr {

struct CurveOverF {
    std::int64_t D = 0;
    FieldElement a1, a2, a3, a4, a6;
    FieldElement b2, b4, b6, b8, c4, c6, discriminant;

    std::array<FieldElement, 5> coeffs() const { return {a1, a2, a3, a4, a6}; }
};

inline CurveOverF make_curve(const RealQuadField& F, const std::array<FieldElement, 5>& a, bool check_unit = true) {
    CurveOverF E;
    E.D = F.D;
    auto lift = [&](const FieldElement& x) { return x + F.elt(0); };
    E.a1 = lift(a[0]);
    E.a2 = lift(a[1]);
    E.a3 = lift(a[2]);
    E.a4 = lift(a[3]);
    E.a6 = lift(a[4]);
    for (const auto& x : a)
        if (!x.is_integral()) fail(errc::precondition, "curve coefficient not integral: " + x.str());
    const auto &a1 = E.a1, &a2 = E.a2, &a3 = E.a3, &a4 = E.a4, &a6 = E.a6;
    FieldElement two = F.elt(2), four = F.elt(4);
    E.b2 = a1 * a1 + four * a2;
    E.b4 = two * a4 + a1 * a3;
    E.b6 = a3 * a3 + four * a6;
    E.b8 = a1 * a1 * a6 + four * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    E.c4 = E.b2 * E.b2 - F.elt(24) * E.b4;
    E.c6 = -E.b2 * E.b2 * E.b2 + F.elt(36) * E.b2 * E.b4 - F.elt(216) * E.b6;
    E.discriminant = -E.b2 * E.b2 * E.b8 - F.elt(8) * E.b4 * E.b4 * E.b4 - F.elt(27) * E.b6 * E.b6 +
                     F.elt(9) * E.b2 * E.b4 * E.b6;
    if (E.discriminant.is_zero()) fail(errc::precondition, "singular curve");
    if (check_unit && boost::multiprecision::abs(E.discriminant.norm()) != 1)
        fail(errc::bad_reduction, "discriminant " + E.discriminant.str() + " is not a unit");
    return E;
}

// Residue field O_F / P: F_p (w -> root) or F_p[theta]/(theta^2 - t theta - n).
struct ResidueField {
    std::int64_t p = 0;
    int degree = 1;
    std::int64_t root = 0;
    std::int64_t t = 0, n = 0;
    std::int64_t q() const { return degree == 1 ? p : p * p; }
};

inline ResidueField residue_field(const RealQuadField& F, const PrimeIdealRep& P) {
    ResidueField k;
    k.p = P.p;
    k.degree = P.residue_degree;
    k.root = P.root;
    k.t = mod_pos(F.mp.t, P.p);
    k.n = mod_pos(F.mp.n, P.p);
    return k;
}

struct Fq {
    std::int64_t a = 0, b = 0; // a + b*theta, b = 0 in degree 1
};

inline std::int64_t mod_big(const bigint& x, std::int64_t p) {
    bigint r = x % p;
    if (r < 0) r += p;
    return r.convert_to<std::int64_t>();
}

inline Fq reduce(const ResidueField& k, const FieldElement& x) {
    using boost::multiprecision::numerator;
    if (!x.is_integral()) fail(errc::precondition, "reducing a non-integral element");
    std::int64_t a = mod_big(numerator(x.a()), k.p), b = mod_big(numerator(x.b()), k.p);
    if (k.degree == 1) return {mod_pos((__int128)a + (__int128)b * k.root, k.p), 0};
    return {a, b};
}

inline Fq fq_add(const ResidueField& k, Fq x, Fq y) { return {(x.a + y.a) % k.p, (x.b + y.b) % k.p}; }
inline Fq fq_mul(const ResidueField& k, Fq x, Fq y) {
    std::int64_t p = k.p;
    if (k.degree == 1) return {static_cast<std::int64_t>((__int128)x.a * y.a % p), 0};
    __int128 bb = (__int128)x.b * y.b % p;
    __int128 a = ((__int128)x.a * y.a + bb * k.n) % p;
    __int128 b = ((__int128)x.a * y.b + (__int128)x.b * y.a + bb * k.t) % p;
    return {static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
}
inline bool fq_zero(Fq x) { return x.a == 0 && x.b == 0; }

// Norm to F_p; z is a square in F_{p^2} iff its norm is a square in F_p.
inline std::int64_t fq_norm(const ResidueField& k, Fq x) {
    if (k.degree == 1) return x.a;
    __int128 p = k.p;
    __int128 v = ((__int128)x.a * x.a + (__int128)k.t * x.a % p * x.b + (p - k.n) * ((__int128)x.b * x.b % p)) % p;
    return static_cast<std::int64_t>(v);
}

// Exhaustive count over all (x, y); used for tiny residue fields and as a reference.
inline std::int64_t count_points_exhaustive(const CurveOverF& E, const ResidueField& k) {
    std::vector<Fq> elts;
    for (std::int64_t a = 0; a < k.p; ++a)
        for (std::int64_t b = 0; b < (k.degree == 1 ? 1 : k.p); ++b) elts.push_back({a, b});
    Fq a1 = reduce(k, E.a1), a2 = reduce(k, E.a2), a3 = reduce(k, E.a3), a4 = reduce(k, E.a4), a6 = reduce(k, E.a6);
    std::int64_t count = 1;
    for (const auto& x : elts) {
        Fq x2 = fq_mul(k, x, x), x3 = fq_mul(k, x2, x);
        Fq rhs = fq_add(k, fq_add(k, x3, fq_mul(k, a2, x2)), fq_add(k, fq_mul(k, a4, x), a6));
        for (const auto& y : elts) {
            Fq lhs = fq_add(k, fq_mul(k, y, y), fq_add(k, fq_mul(k, fq_mul(k, a1, x), y), fq_mul(k, a3, y)));
            if (lhs.a == rhs.a && lhs.b == rhs.b) ++count;
        }
    }
    return count;
}

inline std::int64_t count_points(const RealQuadField& F, const CurveOverF& E, const PrimeIdealRep& P) {
    ResidueField k = residue_field(F, P);
    if (fq_zero(reduce(k, E.discriminant))) fail(errc::bad_reduction, "discriminant vanishes mod prime above " + std::to_string(P.p));
    std::int64_t q = k.q(), p = k.p;
    std::int64_t count;
    if (p <= 3) {
        count = count_points_exhaustive(E, k);
    } else {
        // (2y + a1 x + a3)^2 = g(x) = 4x^3 + b2 x^2 + 2 b4 x + b6
        std::vector<std::int8_t> chi(static_cast<size_t>(p), -1);
        chi[0] = 0;
        for (std::int64_t i = 1; i <= p / 2; ++i) chi[static_cast<size_t>((__int128)i * i % p)] = 1;
        Fq b2 = reduce(k, E.b2), b4 = reduce(k, E.b4), b6 = reduce(k, E.b6);
        std::int64_t s = 0;
        if (k.degree == 1) {
            // finite differences of the cubic along x = 0, 1, 2, ...
            std::int64_t c3 = 4 % p, c2 = b2.a, c1 = 2 * b4.a % p, c0 = b6.a;
            auto g = [&](std::int64_t x) {
                __int128 v = ((( (__int128)c3 * x + c2) % p * x + c1) % p * x + c0) % p;
                return static_cast<std::int64_t>(v);
            };
            std::int64_t g0 = g(0), g1 = g(1), g2 = g(2), g3 = g(3);
            std::int64_t d1 = mod_pos(g1 - g0, p), d2 = mod_pos(g2 - 2 * g1 + g0, p),
                         d3 = mod_pos(g3 - 3 * g2 + 3 * g1 - g0, p);
            std::int64_t v = g0;
            for (std::int64_t x = 0; x < p; ++x) {
                s += chi[static_cast<size_t>(v)];
                v += d1;
                if (v >= p) v -= p;
                d1 += d2;
                if (d1 >= p) d1 -= p;
                d2 += d3;
                if (d2 >= p) d2 -= p;
            }
        } else {
            Fq four{4 % p, 0}, two{2 % p, 0};
            Fq tb4 = fq_mul(k, two, b4);
            for (std::int64_t xa = 0; xa < p; ++xa)
                for (std::int64_t xb = 0; xb < p; ++xb) {
                    Fq x{xa, xb};
                    Fq g = fq_add(k, fq_mul(k, fq_add(k, fq_mul(k, fq_add(k, fq_mul(k, four, x), b2), x), tb4), x), b6);
                    s += chi[static_cast<size_t>(fq_norm(k, g))];
                }
        }
        count = q + 1 + s;
    }
    long double bound = 2 * std::sqrt(static_cast<long double>(q)) + 1e-9L;
    if (std::fabs(static_cast<long double>(q + 1 - count)) > bound)
        fail(errc::invariant_violation, "Hasse bound violated at prime above " + std::to_string(p));
    return count;
}

inline std::int64_t ap(const RealQuadField& F, const CurveOverF& E, const PrimeIdealRep& P) {
    return P.norm() + 1 - count_points(F, E, P);
}

// gcd of #E(O_F/P) over unramified primes of residue characteristic >= 5 and norm <= max_norm;
// the torsion subgroup of E(F) injects into each of these groups.
inline std::int64_t torsion_bound(const RealQuadField& F, const CurveOverF& E, std::int64_t max_norm = 2000) {
    IdealList L = enumerate_ideals(F, max_norm);
    std::int64_t g = 0;
    for (const auto& P : L.primes) {
        if (P.ramified || P.p < 5) continue;
        g = std::gcd(g, count_points(F, E, P));
        if (g == 1) break;
    }
    return g == 0 ? 1 : g;
}

} // namespace atr
