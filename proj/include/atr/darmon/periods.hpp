#pragma once

#include "atr/ecdata/curve.hpp"

#include <array>

namespace atr {

// Real Weierstrass data of E at one real embedding, for the Neron-type differential dx/(2y + a1 x + a3).
struct RealCurve {
    hp_real a1, a2, a3, a4, a6;
    hp_real b2, b4, b6, disc;
};

inline RealCurve embed_curve(const RealQuadField& F, const CurveOverF& E, int i) {
    RealCurve c;
    auto e = [&](const FieldElement& x) { return F.embed<hp_real>(x, i); };
    auto cs = E.coeffs();
    c.a1 = e(cs[0]), c.a2 = e(cs[1]), c.a3 = e(cs[2]), c.a4 = e(cs[3]), c.a6 = e(cs[4]);
    c.b2 = e(E.b2), c.b4 = e(E.b4), c.b6 = e(E.b6), c.disc = e(E.discriminant);
    return c;
}

struct PeriodLattice {
    hp_complex w1, w2;            // basis, w1 real, Im(w2/w1) > 0
    hp_real lambda_plus;          // generator of the lattice on R
    hp_real lambda_minus;         // lambda_minus * i generates the lattice on iR
    std::array<hp_complex, 3> e;  // roots of 4x^3 + b2 x^2 + 2 b4 x + b6
    bool rectangular = true;      // disc > 0
};

inline hp_real agm(hp_real a, hp_real b) {
    using boost::multiprecision::abs;
    using boost::multiprecision::sqrt;
    const hp_real tol = std::numeric_limits<hp_real>::epsilon() * 16;
    for (int it = 0; it < 200; ++it) {
        if (abs(a - b) <= tol * abs(a)) return (a + b) / 2;
        hp_real an = (a + b) / 2;
        b = sqrt(a * b);
        a = an;
    }
    fail(errc::precision_loss, "AGM did not converge");
}

inline std::array<hp_complex, 3> cubic_roots(const hp_real& b2, const hp_real& b4, const hp_real& b6) {
    // monic x^3 + p2 x^2 + p1 x + p0; Durand-Kerner
    hp_complex p2 = b2 / 4, p1 = b4 / 2, p0 = b6 / 4;
    auto f = [&](const hp_complex& x) { return ((x + p2) * x + p1) * x + p0; };
    std::array<hp_complex, 3> r = {hp_complex(hp_real("0.4"), hp_real("0.9")), hp_complex(hp_real("-0.7"), hp_real("0.2")),
                                   hp_complex(hp_real("0.3"), hp_real("-1.1"))};
    hp_real scale = 1 + abs(p2) + abs(p1) + abs(p0);
    for (auto& x : r) x *= scale;
    const hp_real tol = std::numeric_limits<hp_real>::epsilon() * 64;
    for (int it = 0; it < 2000; ++it) {
        hp_real move = 0;
        for (int k = 0; k < 3; ++k) {
            hp_complex den = 1;
            for (int j = 0; j < 3; ++j)
                if (j != k) den *= r[k] - r[j];
            hp_complex d = f(r[k]) / den;
            r[k] -= d;
            move = std::max(move, hp_real(abs(d) / (1 + abs(r[k]))));
        }
        if (move < tol) break;
    }
    return r;
}

inline PeriodLattice period_lattice(const RealCurve& c) {
    using boost::multiprecision::abs;
    using boost::multiprecision::sqrt;
    PeriodLattice L;
    auto r = cubic_roots(c.b2, c.b4, c.b6);
    const hp_real pi_ = pi<hp_real>();
    const hp_complex I(0, 1);
    if (c.disc > 0) {
        std::array<hp_real, 3> e{r[0].real(), r[1].real(), r[2].real()};
        std::sort(e.begin(), e.end(), [](const hp_real& x, const hp_real& y) { return x > y; });
        L.e = {hp_complex(e[0]), hp_complex(e[1]), hp_complex(e[2])};
        L.w1 = pi_ / agm(sqrt(e[0] - e[2]), sqrt(e[0] - e[1]));
        L.w2 = I * (pi_ / agm(sqrt(e[0] - e[2]), sqrt(e[1] - e[2])));
        L.lambda_plus = L.w1.real();
        L.lambda_minus = L.w2.imag();
        L.rectangular = true;
    } else if (c.disc < 0) {
        int k = 0;
        for (int j = 1; j < 3; ++j)
            if (abs(r[j].imag()) < abs(r[k].imag())) k = j;
        hp_real e1 = r[k].real();
        std::array<hp_complex, 2> pair;
        int m = 0;
        for (int j = 0; j < 3; ++j)
            if (j != k) pair[m++] = r[j];
        if (pair[0].imag() < 0) std::swap(pair[0], pair[1]);
        L.e = {hp_complex(e1), pair[0], pair[1]};
        hp_real beta = sqrt(3 * e1 * e1 + c.b2 * e1 / 2 + c.b4 / 2);
        hp_real alpha = 3 * e1 + c.b2 / 4;
        hp_real w1 = 2 * pi_ / agm(2 * sqrt(beta), sqrt(2 * beta + alpha));
        L.w1 = w1;
        L.w2 = -w1 / 2 + I * (pi_ / agm(2 * sqrt(beta), sqrt(2 * beta - alpha)));
        L.lambda_plus = w1;
        L.lambda_minus = (2 * L.w2 + L.w1).imag();
        L.rectangular = false;
    } else {
        fail(errc::precondition, "singular curve");
    }
    return L;
}

// ---- lattice reduction and Weierstrass functions -----------------------------------

// coordinates (s, t) with z = s w1 + t w2
inline std::pair<hp_real, hp_real> lattice_coords(const PeriodLattice& L, const hp_complex& z) {
    hp_real det = L.w1.real() * L.w2.imag() - L.w1.imag() * L.w2.real();
    hp_real s = (z.real() * L.w2.imag() - z.imag() * L.w2.real()) / det;
    hp_real t = (L.w1.real() * z.imag() - L.w1.imag() * z.real()) / det;
    return {s, t};
}

// representative of z in the fundamental parallelogram [0,1) w1 + [0,1) w2
inline hp_complex reduce_mod_lattice(const PeriodLattice& L, const hp_complex& z) {
    using boost::multiprecision::floor;
    auto [s, t] = lattice_coords(L, z);
    return z - hp_complex(floor(s)) * L.w1 - hp_complex(floor(t)) * L.w2;
}

// distance from z to the nearest lattice point (checked over the neighbouring cells)
inline hp_real lattice_distance(const PeriodLattice& L, const hp_complex& z) {
    using boost::multiprecision::round;
    auto [s, t] = lattice_coords(L, z);
    hp_real best = -1;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            hp_complex v = z - hp_complex(round(s) + i) * L.w1 - hp_complex(round(t) + j) * L.w2;
            hp_real d = abs(v);
            if (best < 0 || d < best) best = d;
        }
    return best;
}

// wp(z) and wp'(z) for the lattice, via the q-expansion in q = exp(2 pi i w2/w1)
inline std::pair<hp_complex, hp_complex> weierstrass_p(const PeriodLattice& L, const hp_complex& z0) {
    const hp_complex I(0, 1);
    hp_complex z = reduce_mod_lattice(L, z0);
    // centre the imaginary coordinate to keep |u| and |q/u| balanced
    auto [s, t] = lattice_coords(L, z);
    if (t > hp_real(0.5)) z -= L.w2;
    hp_complex k = 2 * pi<hp_real>() * I / L.w1;
    hp_complex q = exp(k * L.w2), u = exp(k * z);
    auto term = [](const hp_complex& v, hp_complex& d) {
        hp_complex one(1);
        hp_complex m = one - v;
        d = v * (one + v) / (m * m * m); // v * d/dv [v/(1-v)^2]
        return v / (m * m);
    };
    hp_complex d0;
    hp_complex sum = hp_complex(hp_real(1) / 12) + term(u, d0);
    hp_complex dsum = d0;
    hp_complex qn = q;
    const hp_real tol = std::numeric_limits<hp_real>::epsilon();
    for (int n = 1; n < 10000; ++n) {
        hp_complex da, db;
        hp_complex one(1);
        hp_complex a = term(qn * u, da), b = term(qn / u, db);
        hp_complex m = one - qn;
        hp_complex c = 2 * qn / (m * m);
        sum += a + b - c;
        dsum += da - db;
        if (abs(qn) < tol * 1e-3 && abs(a) + abs(b) < tol * (1 + abs(sum))) break;
        qn *= q;
    }
    return {k * k * sum, k * k * k * dsum};
}

// Carlson's R_F for complex arguments off the negative real axis.
inline hp_complex carlson_rf(hp_complex x, hp_complex y, hp_complex z) {
    const hp_real tol = hp_real("1e-10");
    for (int it = 0; it < 500; ++it) {
        hp_complex A = (x + y + z) / 3;
        hp_real dev = std::max({abs(A - x), abs(A - y), abs(A - z)}) / abs(A);
        if (dev < tol) {
            hp_complex X = 1 - x / A, Y = 1 - y / A, Z = -(X + Y);
            hp_complex E2 = X * Y - Z * Z, E3 = X * Y * Z;
            return (1 - E2 / 10 + E3 / 14 + E2 * E2 / 24 - hp_real(3) * E2 * E3 / 44 - hp_real(5) * E2 * E2 * E2 / 208 +
                    hp_real(3) * E3 * E3 / 104 + E2 * E2 * E3 / 16) /
                   sqrt(A);
        }
        hp_complex sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
        hp_complex lam = sx * sy + sy * sz + sz * sx;
        x = (x + lam) / 4;
        y = (y + lam) / 4;
        z = (z + lam) / 4;
    }
    fail(errc::precision_loss, "R_F did not converge");
}

// Elliptic logarithm of (x, y) on the embedded curve; y may be complex.
inline hp_complex elliptic_log(const RealCurve& c, const PeriodLattice& L, const hp_complex& x, const hp_complex& y) {
    hp_complex Y = 2 * y + c.a1 * x + c.a3;
    hp_complex lhs = y * y + c.a1 * x * y + c.a3 * y, rhs = ((x + c.a2) * x + c.a4) * x + c.a6;
    hp_real scale = 1 + abs(lhs) + abs(rhs);
    if (abs(lhs - rhs) > scale * hp_real("1e-30")) fail(errc::point_not_on_curve, "point is not on the curve");
    if (abs(Y) < hp_real("1e-40")) {
        // 2-torsion: half period
        for (const auto& h : {L.w1 / 2, L.w2 / 2, (L.w1 + L.w2) / 2}) {
            auto [p, dp] = weierstrass_p(L, h);
            if (abs(p - (x + c.b2 / 12)) < hp_real("1e-25") * (1 + abs(x))) return h;
        }
        fail(errc::invariant_violation, "2-torsion point without a matching half period");
    }
    // z = int_X^oo dt / sqrt(4 prod(t - e_i)) = R_F(X - e1, X - e2, X - e3) up to sign
    hp_complex z = carlson_rf(x - L.e[0], x - L.e[1], x - L.e[2]);
    auto [p, dp] = weierstrass_p(L, z);
    hp_complex X = x + c.b2 / 12;
    if (abs(p - X) > hp_real("1e-20") * (1 + abs(X))) fail(errc::precision_loss, "elliptic log failed the wp check");
    if (abs(dp + Y) < abs(dp - Y)) z = -z;
    return reduce_mod_lattice(L, z);
}

// ---- relation search ---------------------------------------------------------------

struct RelationResult {
    bool found = false;
    int m = 0, n = 0;
    long k = 0, l = 0; // coordinates in the basis (w1, w2) of the lattice at v0
    hp_real residual = -1;
    int convention = 0; // 0: m J / lambda1+ - n z; 1: m J - n z
    int torsion = 1;    // the combination is checked after multiplying by this
};

// Smallest |m|, then |n|, whose combination t (m J' - n z) lies within threshold of the lattice,
// where t bounds the exponent of the torsion of E(F), since the relations only hold up to torsion.
// Without a hit the closest combination is reported with found = false.
inline RelationResult recognize_relation(const hp_complex& J, const hp_complex& z, const PeriodLattice& L0,
                                         const hp_real& lambda1_plus, int bound = 16, hp_real threshold = hp_real("1e-8"),
                                         bool both_conventions = true, int torsion = 1) {
    using boost::multiprecision::round;
    if (torsion < 1) fail(errc::precondition, "torsion multiplier must be positive");
    RelationResult best, hit;
    for (int conv = 0; conv < (both_conventions ? 2 : 1); ++conv) {
        hp_complex Js = conv == 0 ? J / lambda1_plus : J;
        for (int m = 1; m <= bound; ++m)
            for (int an = 1; an <= bound; ++an)
                for (int n : {-an, an}) {
                    hp_complex v = hp_real(torsion) * (hp_real(m) * Js - hp_real(n) * z);
                    auto [s, t] = lattice_coords(L0, v);
                    hp_complex rem = v - hp_complex(round(s)) * L0.w1 - hp_complex(round(t)) * L0.w2;
                    hp_real r = abs(rem);
                    RelationResult cur;
                    cur.residual = r;
                    cur.m = m, cur.n = n, cur.convention = conv, cur.torsion = torsion;
                    cur.k = -round(s).convert_to<long>();
                    cur.l = -round(t).convert_to<long>();
                    if (best.residual < 0 || r < best.residual) best = cur;
                    if (r < threshold && !hit.found) {
                        hit = cur;
                        hit.found = true;
                    }
                }
        if (hit.found) return hit;
    }
    return best;
}

} // namespace atr
