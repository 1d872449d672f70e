#pragma once

#include "atr/core/errors.hpp"
#include "atr/core/numeric.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace atr {

// w^2 = t*w + n for the integral generator w of Q(sqrt D)
struct min_poly {
    std::int64_t t;
    std::int64_t n;
};

inline bool one_mod_four(std::int64_t D) { return ((D % 4) + 4) % 4 == 1; }

inline min_poly minimal_polynomial(std::int64_t D) {
    if (one_mod_four(D)) return {1, (D - 1) / 4};
    return {0, D};
}

// a + b*w with exact rational coordinates.  D == 0 marks a plain rational
// that adopts the field of whatever it is combined with.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(std::int64_t D, rational a, rational b = 0) : D_(D), a_(std::move(a)), b_(std::move(b)) {
        if (D_ == 0 && b_ != 0) fail(errc::precondition, "rational element with w-part");
    }
    static FieldElement rat(rational q) { return FieldElement(0, std::move(q), 0); }

    std::int64_t D() const { return D_; }
    const rational& a() const { return a_; }
    const rational& b() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_integral() const {
        using boost::multiprecision::denominator;
        return denominator(a_) == 1 && denominator(b_) == 1;
    }
    bool is_rational() const { return b_ == 0; }

    // x = A + B*sqrt(D)
    rational A() const { return one_mod_four(D_) ? a_ + b_ / 2 : a_; }
    rational B() const { return one_mod_four(D_) ? b_ / 2 : b_; }

    rational trace() const {
        if (D_ == 0) return 2 * a_;
        auto mp = minimal_polynomial(D_);
        return 2 * a_ + mp.t * b_;
    }
    rational norm() const {
        if (D_ == 0) return a_ * a_;
        auto mp = minimal_polynomial(D_);
        return a_ * a_ + mp.t * a_ * b_ - mp.n * b_ * b_;
    }
    FieldElement conj() const {
        if (D_ == 0) return *this;
        auto mp = minimal_polynomial(D_);
        return FieldElement(D_, a_ + mp.t * b_, -b_);
    }

    friend FieldElement operator+(const FieldElement& x, const FieldElement& y) {
        return FieldElement(common(x, y), x.a_ + y.a_, x.b_ + y.b_);
    }
    friend FieldElement operator-(const FieldElement& x, const FieldElement& y) {
        return FieldElement(common(x, y), x.a_ - y.a_, x.b_ - y.b_);
    }
    friend FieldElement operator-(const FieldElement& x) { return FieldElement(x.D_, -x.a_, -x.b_); }
    friend FieldElement operator*(const FieldElement& x, const FieldElement& y) {
        std::int64_t D = common(x, y);
        if (D == 0) return FieldElement(0, x.a_ * y.a_, 0);
        auto mp = minimal_polynomial(D);
        rational bd = x.b_ * y.b_;
        return FieldElement(D, x.a_ * y.a_ + mp.n * bd, x.a_ * y.b_ + x.b_ * y.a_ + mp.t * bd);
    }
    friend FieldElement operator/(const FieldElement& x, const FieldElement& y) {
        if (y.is_zero()) fail(errc::precondition, "division by zero in field");
        rational n = y.norm();
        FieldElement c = y.conj() * x;
        return FieldElement(c.D_, c.a_ / n, c.b_ / n);
    }
    FieldElement& operator+=(const FieldElement& y) { return *this = *this + y; }
    FieldElement& operator-=(const FieldElement& y) { return *this = *this - y; }
    FieldElement& operator*=(const FieldElement& y) { return *this = *this * y; }

    friend bool operator==(const FieldElement& x, const FieldElement& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && (x.D_ == y.D_ || x.b_ == 0);
    }
    friend bool operator!=(const FieldElement& x, const FieldElement& y) { return !(x == y); }

    FieldElement pow(long e) const {
        FieldElement base = e < 0 ? FieldElement(D_, 1) / *this : *this;
        if (e < 0) e = -e;
        FieldElement r(D_, 1);
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    std::string str() const {
        if (b_ == 0) return a_.str();
        std::string s;
        if (a_ != 0) s = a_.str();
        std::string bs = b_.str();
        if (b_ == 1)
            bs = "";
        else if (b_ == -1)
            bs = "-";
        else
            bs += "*";
        if (!s.empty() && b_ > 0) s += "+";
        return s + bs + "w";
    }

private:
    static std::int64_t common(const FieldElement& x, const FieldElement& y) {
        if (x.D_ == y.D_ || y.D_ == 0) return x.D_;
        if (x.D_ == 0) return y.D_;
        fail(errc::precondition, "mixing elements of different fields");
    }

    std::int64_t D_ = 0;
    rational a_{0};
    rational b_{0};
};

// Integral element with machine coordinates; the hot path of ideal enumeration.
struct OElt {
    std::int64_t a = 0;
    std::int64_t b = 0;
    friend bool operator==(const OElt&, const OElt&) = default;
};

inline std::int64_t checked_i64(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) fail(errc::precondition, "integer overflow in O_F arithmetic");
    return static_cast<std::int64_t>(v);
}

inline OElt omul(const OElt& x, const OElt& y, const min_poly& mp) {
    __int128 bd = (__int128)x.b * y.b;
    __int128 a = (__int128)x.a * y.a + bd * mp.n;
    __int128 b = (__int128)x.a * y.b + (__int128)x.b * y.a + bd * mp.t;
    return {checked_i64(a), checked_i64(b)};
}
inline __int128 onorm(const OElt& x, const min_poly& mp) {
    return (__int128)x.a * x.a + (__int128)mp.t * x.a * x.b - (__int128)mp.n * x.b * x.b;
}
inline OElt oconj(const OElt& x, const min_poly& mp) { return {x.a + mp.t * x.b, -x.b}; }
inline OElt oneg(const OElt& x) { return {-x.a, -x.b}; }

inline FieldElement to_field(std::int64_t D, const OElt& x) { return FieldElement(D, x.a, x.b); }
inline OElt to_oelt(const FieldElement& x) {
    if (!x.is_integral()) fail(errc::precondition, "element not integral");
    using boost::multiprecision::numerator;
    bigint a = numerator(x.a()), b = numerator(x.b());
    if (boost::multiprecision::abs(a) > INT64_MAX || boost::multiprecision::abs(b) > INT64_MAX)
        fail(errc::precondition, "coordinates exceed 64 bits");
    return {a.convert_to<std::int64_t>(), b.convert_to<std::int64_t>()};
}

// sign of P + Q*sqrt(D), exactly
inline int sign_surd(const rational& P, const rational& Q, std::int64_t D) {
    int sp = P.sign(), sq = Q.sign();
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    rational lhs = P * P, rhs = Q * Q * D;
    if (lhs > rhs) return sp;
    return sq;
}

struct RealQuadField {
    std::int64_t D = 0;
    int sign = 1; // v0(sqrt D) = sign * sqrt D, v1 the other one
    min_poly mp{0, 0};
    FieldElement w, u, delta;
    int precision_bits = 64;
    long double u0 = 0, u1 = 0, sqrtD = 0;
    long double log_u0 = 0;

    FieldElement elt(const rational& a, const rational& b = 0) const { return FieldElement(D, a, b); }
    FieldElement elt(const OElt& x) const { return FieldElement(D, x.a, x.b); }
    FieldElement sqrt_d() const { return one_mod_four(D) ? elt(-1, 2) : elt(0, 1); }
    int sgn(int i) const { return i == 0 ? sign : -sign; }

    // v_i(x) without cancellation: the small embedding is recovered as Nm(x)/(large one)
    template <class R> R embed(const FieldElement& x, int i) const {
        rational A = x.A(), B = x.B();
        if (x.D() == 0 || B == 0) return to_real<R>(A);
        using std::sqrt;
        R rd = sqrt(R(D));
        int s = sgn(i);
        R Ar = to_real<R>(A), Br = to_real<R>(B);
        if (A == 0 || A.sign() == s * B.sign()) return Ar + R(s) * Br * rd;
        R other = Ar - R(s) * Br * rd;
        return to_real<R>(A * A - B * B * D) / other;
    }
    template <class R> R embed(const OElt& x, int i) const {
        if (x.b == 0) return R(x.a);
        using std::sqrt;
        R rd = sqrt(R(D));
        int s = sgn(i);
        // x = (2a + t b)/2 + (b/2) sqrt D when D = 1 mod 4, else a + b sqrt D
        __int128 P = one_mod_four(D) ? (__int128)2 * x.a + x.b : (__int128)x.a;
        __int128 Q = x.b;
        R den = one_mod_four(D) ? R(2) : R(1);
        R Pr = R(static_cast<long double>(P)), Qr = R(static_cast<long double>(Q));
        if (P == 0 || (P > 0) == (s * Q > 0)) return (Pr + R(s) * Qr * rd) / den;
        R other = Pr - R(s) * Qr * rd;
        __int128 nm = P * P - Q * Q * D;
        return R(static_cast<long double>(nm)) / other / den;
    }
    int embed_sign(const FieldElement& x, int i) const { return sign_surd(x.A(), sgn(i) * x.B(), D); }
    int embed_sign(const OElt& x, int i) const { return embed_sign(elt(x), i); }
    bool totally_positive(const FieldElement& x) const { return embed_sign(x, 0) > 0 && embed_sign(x, 1) > 0; }
};

inline bool is_squarefree(std::int64_t D) {
    for (std::int64_t p = 2; p * p <= D; ++p)
        if (D % (p * p) == 0) return false;
    return true;
}

inline std::int64_t isqrt64(std::int64_t n) {
    if (n < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && (__int128)r * r > n) --r;
    while ((__int128)(r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Fundamental unit by the continued fraction of w: every unit p - q*w with
// q > 0 appears among the convergents of the real number (1+sqrt D)/2 (or sqrt D).
inline FieldElement fundamental_unit_raw(std::int64_t D) {
    bool one4 = one_mod_four(D);
    bigint P = one4 ? 1 : 0, Q = one4 ? 2 : 1;
    bigint s = boost::multiprecision::sqrt(bigint(D));
    bigint p1 = 1, p2 = 0, q1 = 0, q2 = 1;
    auto mp = minimal_polynomial(D);
    for (int iter = 0; iter < 200000; ++iter) {
        bigint num = P + s;
        bigint a;
        if (Q > 0) {
            a = num / Q;
            if (num < 0 && a * Q != num) a -= 1;
        } else {
            bigint nn = -(P + s + 1), qq = -Q;
            a = nn / qq;
            if (nn < 0 && a * qq != nn) a -= 1;
        }
        bigint p = a * p1 + p2, q = a * q1 + q2;
        p2 = p1;
        p1 = p;
        q2 = q1;
        q1 = q;
        // candidate p - q*w
        bigint nm = p * p - mp.t * p * q - mp.n * q * q;
        if (nm == 1 || nm == -1) return FieldElement(D, rational(p), rational(-q));
        bigint Pn = a * Q - P;
        bigint Qn = (bigint(D) - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
    fail(errc::search_bound_exceeded, "fundamental unit search did not terminate");
}

inline FieldElement fundamental_unit(const RealQuadField& F) { return F.u; }

// Field with everything except the class-number check (see make_field).
inline RealQuadField make_field_unchecked(std::int64_t D, int precision_bits = 64, int sign = 1) {
    if (D <= 1) fail(errc::precondition, "D must exceed 1");
    if (!is_squarefree(D)) fail(errc::not_squarefree, "D = " + std::to_string(D));
    if (sign != 1 && sign != -1) fail(errc::precondition, "embedding sign must be +1 or -1");
    RealQuadField F;
    F.D = D;
    F.sign = sign;
    F.mp = minimal_polynomial(D);
    F.precision_bits = precision_bits;
    F.w = F.elt(0, 1);
    FieldElement e = fundamental_unit_raw(D);
    if (e.norm() != -1) fail(errc::no_norm_minus_one_unit, "fundamental unit has norm +1 for D = " + std::to_string(D));
    // v0(u) > 1 and v1(u) = -1/v0(u) in (-1, 0)
    FieldElement cands[4] = {e, -e, F.elt(1) / e, -(F.elt(1) / e)};
    bool found = false;
    for (auto& c : cands) {
        if (F.embed<long double>(c, 0) > 1) {
            F.u = c;
            found = true;
            break;
        }
    }
    if (!found) fail(errc::invariant_violation, "unit normalization");
    F.u0 = F.embed<long double>(F.u, 0);
    F.u1 = F.embed<long double>(F.u, 1);
    F.log_u0 = std::log(F.u0);
    F.sqrtD = std::sqrt(static_cast<long double>(D));
    FieldElement d = F.sqrt_d();
    if (F.embed_sign(d, 0) != F.embed_sign(d, 1)) d = d * F.u;
    if (F.embed_sign(d, 0) < 0) d = -d;
    F.delta = d;
    return F;
}

} // namespace atr
