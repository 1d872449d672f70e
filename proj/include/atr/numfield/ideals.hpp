#pragma once

#include "atr/numfield/field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace atr {

struct PrimeIdealRep {
    std::int64_t p = 0;
    OElt gen;               // |Nm(gen)| = p^residue_degree
    int residue_degree = 1;
    bool ramified = false;
    std::int64_t root = -1; // image of w in O_F/P when residue_degree == 1
    std::int64_t norm() const { return residue_degree == 1 ? p : p * p; }
};

struct IdealRep {
    OElt gen;                 // balanced totally positive generator
    std::int64_t norm = 1;
    std::vector<std::pair<int, int>> factorization; // (index into prime list, exponent)
};

inline std::int64_t mod_pos(__int128 a, std::int64_t m) {
    __int128 r = a % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

inline std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m) {
    __int128 r = 1, x = mod_pos(b, m);
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

inline std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, a1 = mod_pos(a, m);
    while (a1) {
        std::int64_t q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) fail(errc::precondition, "not invertible");
    return mod_pos(x, m);
}

// Legendre symbol for odd prime p
inline int legendre(std::int64_t a, std::int64_t p) {
    std::int64_t r = mod_pos(a, p);
    if (r == 0) return 0;
    return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// 1 split, -1 inert, 0 ramified
inline int splitting_type(std::int64_t D, std::int64_t p) {
    if (p == 2) {
        if (!one_mod_four(D)) return 0;
        return (((D % 8) + 8) % 8 == 1) ? 1 : -1;
    }
    return legendre(D, p);
}

// Multiply x by the power of u that best balances |v0| against |v1|.
inline OElt balance_by_units(const RealQuadField& F, OElt x, bool even_only) {
    if (x.a == 0 && x.b == 0) return x;
    long double l0 = std::log(std::fabs(F.embed<long double>(x, 0)));
    long double l1 = std::log(std::fabs(F.embed<long double>(x, 1)));
    long double step = (even_only ? 4 : 2) * F.log_u0;
    long long k = std::llround(-(l0 - l1) / step);
    if (k == 0) return x;
    OElt u = to_oelt(F.u);
    OElt uinv = oneg(oconj(u, F.mp)); // Nm(u) = -1
    OElt m = k > 0 ? u : uinv;
    if (even_only) m = omul(m, m, F.mp);
    for (long long i = 0; i < (k > 0 ? k : -k); ++i) x = omul(x, m, F.mp);
    return x;
}

// Rigorous search radius: some generator of a principal ideal of norm m has |v0|,|v1| <= sqrt(m*u0).
inline std::int64_t generator_b_bound(const RealQuadField& F, std::int64_t m) {
    long double R = std::sqrt(static_cast<long double>(m) * F.u0);
    long double width = one_mod_four(F.D) ? F.sqrtD : 2 * F.sqrtD;
    return static_cast<std::int64_t>(std::ceil(2 * R / width)) + 1;
}

// Element of norm +-m, scanning |b| upward and solving the quadratic for a.
inline std::optional<OElt> find_element_of_norm(const RealQuadField& F, std::int64_t m, std::int64_t bmax) {
    const auto& mp = F.mp;
    for (std::int64_t bb = 0; bb <= bmax; ++bb) {
        for (int sb : {1, -1}) {
            if (bb == 0 && sb < 0) continue;
            std::int64_t b = sb * bb;
            for (int sn : {1, -1}) {
                // a^2 + t b a - (n b^2 + sn m) = 0
                __int128 disc = (__int128)mp.t * mp.t * b * b + 4 * ((__int128)mp.n * b * b + (__int128)sn * m);
                if (disc < 0) continue;
                if (disc > (__int128)INT64_MAX) fail(errc::search_bound_exceeded, "norm search overflow");
                std::int64_t s = isqrt64(static_cast<std::int64_t>(disc));
                if ((__int128)s * s != disc) continue;
                for (int sr : {1, -1}) {
                    __int128 num = -(__int128)mp.t * b + sr * s;
                    if (num % 2 != 0) continue;
                    OElt x{checked_i64(num / 2), b};
                    if (onorm(x, mp) == (__int128)sn * m) return x;
                }
            }
        }
    }
    return std::nullopt;
}

inline std::vector<PrimeIdealRep> factor_rational_prime(const RealQuadField& F, std::int64_t p,
                                                        std::int64_t hard_cap = 0) {
    int type = splitting_type(F.D, p);
    if (type < 0) return {PrimeIdealRep{p, OElt{p, 0}, 2, false, -1}};
    std::int64_t bmax = generator_b_bound(F, p);
    if (hard_cap > 0) bmax = std::min(bmax, hard_cap);
    auto g = find_element_of_norm(F, p, bmax);
    if (!g) fail(errc::search_bound_exceeded, "no generator of norm " + std::to_string(p));
    OElt pi = balance_by_units(F, *g, false);
    auto root_of = [&](const OElt& x) {
        // x in P = (p, w - r) iff a + b r = 0 mod p
        return mod_pos((__int128)(p - mod_pos(x.a, p)) * inv_mod(x.b, p), p);
    };
    if (type == 0) return {PrimeIdealRep{p, pi, 1, true, root_of(pi)}};
    OElt pc = balance_by_units(F, oconj(pi, F.mp), false);
    PrimeIdealRep P1{p, pi, 1, false, root_of(pi)}, P2{p, pc, 1, false, root_of(pc)};
    if (P2.root < P1.root) std::swap(P1, P2);
    return {P1, P2};
}

inline OElt balanced_generator(const RealQuadField& F, OElt x) {
    if (F.embed_sign(x, 0) <= 0 || F.embed_sign(x, 1) <= 0)
        fail(errc::precondition, "balanced_generator needs a totally positive element");
    return balance_by_units(F, x, true);
}

inline FieldElement balanced_generator(const RealQuadField& F, const FieldElement& x) {
    return F.elt(balanced_generator(F, to_oelt(x)));
}

// Totally positive associate, balanced modulo <u^2>.
inline OElt canonical_generator(const RealQuadField& F, OElt x) {
    if (onorm(x, F.mp) < 0) x = omul(x, to_oelt(F.u), F.mp);
    if (F.embed_sign(x, 0) < 0) x = oneg(x);
    return balanced_generator(F, x);
}

inline std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<size_t>(n) + 1, false);
    for (std::int64_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

// Class number one check: every prime below the Minkowski bound is principal.
inline RealQuadField make_field(std::int64_t D, int precision_bits = 64, int sign = 1) {
    RealQuadField F = make_field_unchecked(D, precision_bits, sign);
    long double disc = one_mod_four(D) ? D : 4.0L * D;
    auto mink = static_cast<std::int64_t>(std::floor(std::sqrt(disc) / 2));
    for (std::int64_t p : primes_up_to(mink)) {
        if (splitting_type(D, p) < 0) continue;
        if (!find_element_of_norm(F, p, generator_b_bound(F, p)))
            fail(errc::class_number_not_one, "prime above " + std::to_string(p) + " is not principal");
    }
    return F;
}

struct IdealList {
    std::vector<PrimeIdealRep> primes; // sorted by (norm, p, root)
    std::vector<IdealRep> ideals;      // canonical order
};

inline std::vector<PrimeIdealRep> prime_ideals_up_to(const RealQuadField& F, std::int64_t N) {
    std::vector<PrimeIdealRep> out;
    for (std::int64_t p : primes_up_to(N)) {
        if (splitting_type(F.D, p) < 0 && (__int128)p * p > N) continue;
        for (auto& P : factor_rational_prime(F, p)) out.push_back(P);
    }
    std::stable_sort(out.begin(), out.end(), [](const PrimeIdealRep& x, const PrimeIdealRep& y) {
        if (x.norm() != y.norm()) return x.norm() < y.norm();
        if (x.p != y.p) return x.p < y.p;
        return x.root < y.root;
    });
    return out;
}

inline bool ideal_order(const IdealRep& x, const IdealRep& y) {
    if (x.norm != y.norm) return x.norm < y.norm;
    if (x.gen.a != y.gen.a) return x.gen.a < y.gen.a;
    return x.gen.b < y.gen.b;
}

inline IdealList enumerate_ideals(const RealQuadField& F, std::int64_t N) {
    require(N >= 1, "enumerate_ideals needs N >= 1");
    IdealList L;
    L.primes = prime_ideals_up_to(F, N);
    std::vector<std::pair<int, int>> fact;
    std::function<void(size_t, std::int64_t, OElt)> rec = [&](size_t start, std::int64_t norm, OElt g) {
        IdealRep I;
        I.norm = norm;
        I.gen = canonical_generator(F, g);
        I.factorization = fact;
        L.ideals.push_back(std::move(I));
        for (size_t i = start; i < L.primes.size(); ++i) {
            const auto& P = L.primes[i];
            if (P.norm() > N / norm) break;
            std::int64_t nn = norm;
            OElt gg = g;
            for (int e = 1; P.norm() <= N / nn; ++e) {
                nn *= P.norm();
                gg = balance_by_units(F, omul(gg, P.gen, F.mp), false);
                fact.emplace_back(static_cast<int>(i), e);
                rec(i + 1, nn, gg);
                fact.pop_back();
            }
        }
    };
    rec(0, 1, OElt{1, 0});
    std::sort(L.ideals.begin(), L.ideals.end(), ideal_order);
    return L;
}

} // namespace atr
