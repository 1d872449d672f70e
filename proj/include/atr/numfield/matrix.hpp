#pragma once

#include "atr/numfield/field.hpp"

#include <optional>

namespace atr {

struct Mat2 {
    FieldElement a, b, c, d;

    static Mat2 identity(std::int64_t D) { return {FieldElement(D, 1), FieldElement(D, 0), FieldElement(D, 0), FieldElement(D, 1)}; }
    FieldElement det() const { return a * d - b * c; }
    FieldElement trace() const { return a + d; }
    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const Mat2& x, const Mat2& y) { return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d; }
    Mat2 adjugate() const { return {d, -b, -c, a}; }
    Mat2 inverse() const {
        FieldElement dt = det();
        Mat2 m = adjugate();
        return {m.a / dt, m.b / dt, m.c / dt, m.d / dt};
    }
    Mat2 scaled(const FieldElement& s) const { return {a * s, b * s, c * s, d * s}; }
    bool is_integral() const { return a.is_integral() && b.is_integral() && c.is_integral() && d.is_integral(); }
};

// Element of P^1(F); nullopt is the cusp at infinity.
using Cusp = std::optional<FieldElement>;

inline Cusp act(const Mat2& m, const Cusp& x) {
    if (!x) {
        if (m.c.is_zero()) return std::nullopt;
        return m.a / m.c;
    }
    FieldElement den = m.c * *x + m.d;
    if (den.is_zero()) return std::nullopt;
    return (m.a * *x + m.b) / den;
}

inline bool cusp_equal(const Cusp& x, const Cusp& y) {
    if (!x || !y) return !x && !y;
    return *x == *y;
}

template <class R> struct RealMat2 {
    R a, b, c, d;
    R det() const { return a * d - b * c; }
};

template <class R> RealMat2<R> embed(const RealQuadField& F, const Mat2& m, int i) {
    return {F.embed<R>(m.a, i), F.embed<R>(m.b, i), F.embed<R>(m.c, i), F.embed<R>(m.d, i)};
}

// Action on the upper half plane: z -> (az+b)/(cz+d), or on conj(z) when det < 0.
template <class R> complex_t<R> act_uhp(const RealMat2<R>& m, complex_t<R> z) {
    if (m.det() < 0) z = conj(z);
    return (m.a * z + m.b) / (m.c * z + m.d);
}

} // namespace atr
