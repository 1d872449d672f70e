#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <limits>

namespace atr {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

// 50 decimal digits; used for constants quoted to 20+ digits
using hp_real = boost::multiprecision::cpp_bin_float_50;
using hp_complex = boost::multiprecision::cpp_complex_50;

template <class R> struct complex_of { using type = std::complex<R>; };
template <> struct complex_of<hp_real> { using type = hp_complex; };
template <class R> using complex_t = typename complex_of<R>::type;

template <class R> inline R pi() { return boost::math::constants::pi<R>(); }
template <class R> inline R two_pi() { return boost::math::constants::two_pi<R>(); }

template <class R> inline int decimal_digits() { return std::numeric_limits<R>::digits10; }

template <class R> inline R to_real(const bigint& n) {
    if constexpr (std::is_floating_point_v<R>) {
        return static_cast<R>(n.convert_to<long double>());
    } else {
        return R(n);
    }
}

template <class R> inline R to_real(const rational& q) {
    if constexpr (std::is_floating_point_v<R>) {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        const bigint& num = numerator(q);
        const bigint& den = denominator(q);
        // both parts may exceed long double range only for absurd inputs
        return static_cast<R>(num.convert_to<long double>() / den.convert_to<long double>());
    } else {
        return R(boost::multiprecision::numerator(q)) / R(boost::multiprecision::denominator(q));
    }
}

// Neumaier compensated sum
template <class R> struct compensated_sum {
    R sum{0};
    R comp{0};
    void add(const R& x) {
        R t = sum + x;
        using std::abs;
        if (abs(sum) >= abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    R value() const { return sum + comp; }
};

template <class R> struct compensated_csum {
    compensated_sum<R> re, im;
    void add(const R& a, const R& b) {
        re.add(a);
        im.add(b);
    }
    void add(const complex_t<R>& z) { add(z.real(), z.imag()); }
    complex_t<R> value() const { return complex_t<R>(re.value(), im.value()); }
};

} // namespace atr
