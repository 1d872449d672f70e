#pragma once

#include "atr/core/errors.hpp"
#include "atr/core/numeric.hpp"

#include <cmath>

namespace atr {

template <class R> R hyperbolic_distance(const complex_t<R>& x, const complex_t<R>& y) {
    using std::abs;
    using std::asinh;
    using std::sqrt;
    return 2 * asinh(abs(x - y) / (2 * sqrt(x.imag() * y.imag())));
}

// Lower bound for d(x, y) in terms of the ratio of heights alone.
template <class R> R distance_from_height_ratio(R ratio) {
    using std::acosh;
    return acosh(1 + (ratio - 1) * (ratio - 1) / (2 * ratio));
}

// Point of the geodesic from x to y at height h, the first one met when leaving x.
template <class R> complex_t<R> geodesic_point_at_height(const complex_t<R>& x, const complex_t<R>& y, R h) {
    using std::abs;
    using std::sqrt;
    if (!(h > 0)) fail(errc::height_not_attained, "height must be positive");
    const R xr = x.real(), xi = x.imag(), yr = y.real(), yi = y.imag();
    const R lo = xr < yr ? xr : yr, hi = xr < yr ? yr : xr;
    const R scale = 1 + abs(xr) + abs(yr) + xi + yi;
    const R tiny = 64 * std::numeric_limits<R>::epsilon() * scale;
    auto between = [&](R v) { return v >= lo - tiny && v <= hi + tiny; };

    if (abs(yr - xr) <= tiny * 1e-3) {
        R top = xi > yi ? xi : yi, bot = xi > yi ? yi : xi;
        if (h > top * (1 + tiny) || h < bot * (1 - tiny)) fail(errc::height_not_attained, "vertical geodesic");
        return complex_t<R>(xr, h);
    }
    const R nx = xr * xr + xi * xi, ny = yr * yr + yi * yi;
    const R kappa = (yr - xr) / (ny - nx); // 1/(2 center)
    R cand[2];
    int ncand = 0;
    if (abs(kappa) > 1 || !std::isfinite(static_cast<long double>(kappa))) {
        const R c = (ny - nx) / (2 * (yr - xr));
        const R rad2 = (xr - c) * (xr - c) + xi * xi;
        if (h * h > rad2 * (1 + tiny)) fail(errc::height_not_attained, "above the apex");
        R s = rad2 - h * h;
        s = s > 0 ? sqrt(s) : R(0);
        cand[ncand++] = c - s;
        cand[ncand++] = c + s;
    } else {
        // kappa d^2 + (2 kappa xr - 1) d - kappa (xi^2 - h^2) = 0, d = Re t - xr
        const R a = kappa, b = 2 * kappa * xr - 1, c0 = -kappa * (xi * xi - h * h);
        R disc = b * b - 4 * a * c0;
        if (disc < -tiny) fail(errc::height_not_attained, "above the apex");
        disc = disc > 0 ? sqrt(disc) : R(0);
        R q = -(b + (b >= 0 ? disc : -disc)) / 2;
        if (q != 0) cand[ncand++] = xr + c0 / q;
        if (a != 0) cand[ncand++] = xr + q / a;
    }
    bool found = false;
    R best{};
    for (int i = 0; i < ncand; ++i) {
        if (!between(cand[i])) continue;
        if (!found || abs(cand[i] - xr) < abs(best - xr)) best = cand[i];
        found = true;
    }
    if (!found) fail(errc::height_not_attained, "height not met between the endpoints");
    if (best < lo) best = lo;
    if (best > hi) best = hi;
    return complex_t<R>(best, h);
}

} // namespace atr
