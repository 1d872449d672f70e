#pragma once

#include "atr/numfield/ideals.hpp"
#include "atr/numfield/matrix.hpp"

#include <boost/multiprecision/integer.hpp>

namespace atr {

// K = F(sqrt beta), complex at v0 and real at v1.
struct ATRExtension {
    FieldElement beta;
};

inline ATRExtension make_atr_extension(const RealQuadField& F, const FieldElement& beta) {
    if (!(F.embed_sign(beta, 0) < 0 && F.embed_sign(beta, 1) > 0))
        fail(errc::precondition, "beta must be negative at v0 and positive at v1");
    return {beta};
}

struct OptimalEmbedding {
    Mat2 M;            // image of the order generator alpha
    hp_complex tau0;   // fixed point at v0
    Mat2 gamma_phi;    // generator of the determinant-one units x + y M
};

// ---- exact square roots ----------------------------------------------------------

inline std::optional<rational> rational_sqrt(const rational& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (q < 0) return std::nullopt;
    bigint n = numerator(q), d = denominator(q);
    bigint sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
    if (sn * sn != n || sd * sd != d) return std::nullopt;
    return rational(sn, sd);
}

// x with x^2 = z in F, if any.
inline std::optional<FieldElement> field_sqrt(const FieldElement& z) {
    std::int64_t D = z.D();
    rational A = z.A(), B = z.B();
    auto from_ab = [&](const rational& a, const rational& b) {
        // a + b sqrt D in the (a, b*w) coordinates
        if (D == 0) return FieldElement(0, a);
        if (one_mod_four(D)) return FieldElement(D, a - b, 2 * b);
        return FieldElement(D, a, b);
    };
    if (B == 0) {
        if (auto r = rational_sqrt(A)) return from_ab(*r, 0);
        if (D != 0)
            if (auto r = rational_sqrt(A / D)) return from_ab(0, *r);
        return std::nullopt;
    }
    auto s = rational_sqrt(A * A - B * B * D);
    if (!s) return std::nullopt;
    const rational halves[2] = {(A + *s) / 2, (A - *s) / 2};
    for (const rational& a2 : halves) {
        auto a = rational_sqrt(a2);
        if (!a || *a == 0) continue;
        rational b = B / (2 * *a);
        FieldElement x = from_ab(*a, b);
        if (x * x == z) return x;
    }
    return std::nullopt;
}

// ---- fixed point and the stabilizer --------------------------------------------

inline hp_complex fixed_point(const RealQuadField& F, const Mat2& M) {
    // c tau^2 + (d - a) tau - b = 0 at v0
    hp_real c = F.embed<hp_real>(M.c, 0), e = F.embed<hp_real>(M.d - M.a, 0), b = F.embed<hp_real>(M.b, 0);
    hp_real disc = e * e + 4 * c * b;
    if (!(disc < 0) || c == 0) fail(errc::no_complex_root, "embedding is not elliptic at v0");
    hp_real re = -e / (2 * c), im = boost::multiprecision::sqrt(-disc) / (2 * boost::multiprecision::abs(c));
    return hp_complex(re, im);
}

// det(x + y M) = x^2 + tr(M) x y + det(M) y^2 = 1 with y != 0.  At v0 the eigenvalues of x + y M
// have modulus one, so |v0(y)| <= 2/sqrt|v0(disc)|; the search runs over growing |v1(y)|,
// and the smallest |v1(y)| gives the generator.
inline Mat2 find_gamma_phi(const RealQuadField& F, const Mat2& M, long double height_bound = 1e9L) {
    FieldElement t = M.trace(), n = M.det();
    FieldElement disc = t * t - FieldElement(F.D, 4) * n;
    long double disc0 = F.embed<long double>(disc, 0), disc1 = F.embed<long double>(disc, 1);
    if (!(disc0 < 0 && disc1 > 0)) fail(errc::precondition, "embedding is not ATR");
    const long double s = 2 / std::sqrt(-disc0) * (1 + 1e-12L);
    const long double w0 = F.embed<long double>(F.w, 0), w1 = F.embed<long double>(F.w, 1);
    for (long double H = 4; H <= height_bound; H *= 4) {
        std::optional<Mat2> best;
        long double best_h = 0;
        auto qmax = static_cast<std::int64_t>(std::ceil((s + H) / std::fabs(w0 - w1)));
        for (std::int64_t q = -qmax; q <= qmax; ++q) {
            long double lo = std::max(-s - q * w0, -H - q * w1), hi = std::min(s - q * w0, H - q * w1);
            for (auto p = static_cast<std::int64_t>(std::ceil(lo)); p <= static_cast<std::int64_t>(std::floor(hi)); ++p) {
                if (p == 0 && q == 0) continue;
                FieldElement y = F.elt(p, q);
                auto r = field_sqrt(y * y * disc + FieldElement(F.D, 4));
                if (!r) continue;
                FieldElement x = (*r - t * y) / FieldElement(F.D, 2);
                if (!x.is_integral()) continue;
                long double h = std::fabs(F.embed<long double>(y, 1));
                if (best && h >= best_h) continue;
                best = Mat2{x + y * M.a, y * M.b, y * M.c, x + y * M.d};
                best_h = h;
            }
        }
        if (best) {
            Mat2 g = *best;
            if (!(g.det() == FieldElement(F.D, 1))) fail(errc::invariant_violation, "gamma_phi determinant");
            // canonical sign: positive trace at v1, then the representative with v1(y) > 0
            if (F.embed_sign(g.trace(), 1) < 0) g = g.scaled(FieldElement(F.D, -1));
            FieldElement yv = M.c.is_zero() ? g.b / M.b : g.c / M.c;
            if (F.embed_sign(yv, 1) < 0) g = g.adjugate();
            return g;
        }
    }
    fail(errc::search_bound_exceeded, "no unit of relative norm one below the height bound");
}

inline OptimalEmbedding make_embedding(const RealQuadField& F, const Mat2& M, std::optional<Mat2> gamma = std::nullopt) {
    OptimalEmbedding e;
    e.M = M;
    e.tau0 = fixed_point(F, M);
    e.gamma_phi = gamma ? *gamma : find_gamma_phi(F, M);
    if (!(e.gamma_phi.det() == FieldElement(F.D, 1))) fail(errc::precondition, "gamma_phi must have determinant 1");
    return e;
}

// Companion matrix of alpha^2 - t alpha + n = 0.
inline Mat2 companion(const FieldElement& t, const FieldElement& n) {
    std::int64_t D = t.D() ? t.D() : n.D();
    return {FieldElement(D, 0), -n, FieldElement(D, 1), t};
}

} // namespace atr
