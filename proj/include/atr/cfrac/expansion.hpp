#pragma once

#include "atr/cfrac/division.hpp"
#include "atr/hmfint/region.hpp"
#include "atr/numfield/matrix.hpp"

#include <functional>
#include <set>

namespace atr {

struct CFExpansion {
    std::vector<FieldElement> coeffs;
    std::vector<std::pair<FieldElement, FieldElement>> convergents; // (p_k, q_k)
};

inline FieldElement evaluate_cf(const std::vector<FieldElement>& coeffs) {
    if (coeffs.empty()) fail(errc::precondition, "empty continued fraction");
    FieldElement v = coeffs.back();
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
        if (v.is_zero()) fail(errc::precondition, "continued fraction hits 1/0");
        v = coeffs[k] + FieldElement(v.D(), 1) / v;
    }
    return v;
}

inline std::vector<std::pair<FieldElement, FieldElement>> convergents_of(const std::vector<FieldElement>& b) {
    std::int64_t D = b.empty() ? 0 : b.front().D();
    FieldElement p(D, 1), q(D, 0), pm(D, 0), qm(D, 1); // p_{-1}, q_{-1}, p_{-2}, q_{-2}
    std::vector<std::pair<FieldElement, FieldElement>> out;
    for (const auto& bk : b) {
        FieldElement pn = bk * p + pm, qn = bk * q + qm;
        pm = p, qm = q;
        p = pn, q = qn;
        out.emplace_back(p, q);
    }
    return out;
}

inline CFExpansion make_expansion(std::vector<FieldElement> coeffs) {
    CFExpansion e;
    e.convergents = convergents_of(coeffs);
    e.coeffs = std::move(coeffs);
    return e;
}

// c = a/b with a, b integral; the expansion does not care about common factors
inline std::pair<FieldElement, FieldElement> integral_fraction(const FieldElement& c) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::lcm;
    bigint m = lcm(denominator(c.a()), denominator(c.b()));
    return {c * FieldElement(c.D(), rational(m)), FieldElement(c.D(), rational(m))};
}

struct EnumerationOptions {
    int max_len = 5;
    std::size_t max_count = 200;
    int radius = 2;
    std::size_t node_budget = 200000;
    UnitBoxes unit_boxes = UnitBoxes::when_empty;
};

// Depth-first over the division choices at each stage.  Results are unique as coefficient
// lists, kept in discovery order; shorter expansions are listed first.
inline std::vector<CFExpansion> enumerate_expansions(const FieldElement& c, const EnumerationOptions& opt = {}) {
    auto [a0, b0] = integral_fraction(c);
    std::vector<std::vector<FieldElement>> found;
    std::set<std::vector<std::pair<rational, rational>>> seen;
    std::size_t nodes = 0;
    std::vector<FieldElement> cur;
    std::function<void(const FieldElement&, const FieldElement&)> dfs = [&](const FieldElement& a, const FieldElement& b) {
        if (++nodes > opt.node_budget) return;
        if (b.is_zero()) {
            std::vector<std::pair<rational, rational>> key;
            for (const auto& x : cur) key.emplace_back(x.a(), x.b());
            if (seen.insert(key).second) found.push_back(cur);
            return;
        }
        int room = opt.max_len - static_cast<int>(cur.size());
        if (room <= 0) return;
        for (const auto& ch : two_stage_divisions(a, b, opt.radius, opt.unit_boxes)) {
            if (!ch.two_stage) {
                cur.push_back(ch.q1);
                dfs(b, ch.r1);
                cur.pop_back();
            } else if (room >= 2 && !ch.r1.is_zero()) {
                cur.push_back(ch.q1);
                cur.push_back(ch.q2);
                dfs(ch.r1, ch.r2);
                cur.pop_back();
                cur.pop_back();
            }
            if (nodes > opt.node_budget) return;
        }
    };
    dfs(a0, b0);
    if (found.empty())
        fail(errc::none_found, "no continued fraction of length <= " + std::to_string(opt.max_len) + " for " + c.str() +
                                   " (radius " + std::to_string(opt.radius) + ")");
    std::stable_sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
    if (found.size() > opt.max_count) found.resize(opt.max_count);
    std::vector<CFExpansion> out;
    for (auto& f : found) {
        CFExpansion e = make_expansion(std::move(f));
        if (!(evaluate_cf(e.coeffs) == c)) fail(errc::invariant_violation, "expansion does not evaluate to its target");
        out.push_back(std::move(e));
    }
    return out;
}

// Greedy chain: always the first division choice (a one-stage euclidean step when one exists).
inline CFExpansion greedy_expansion(const FieldElement& c, int radius = 2, int max_len = 64) {
    auto [a, b] = integral_fraction(c);
    std::vector<FieldElement> coeffs;
    while (!b.is_zero()) {
        if (static_cast<int>(coeffs.size()) >= max_len) fail(errc::none_found, "greedy expansion too long");
        std::vector<DivisionChoice> ch;
        for (int r = radius; r <= radius + 4 && ch.empty(); ++r) ch = two_stage_divisions(a, b, r);
        if (ch.empty()) fail(errc::none_found, "no division for " + a.str() + " / " + b.str());
        const auto& d = ch.front();
        if (!d.two_stage) {
            coeffs.push_back(d.q1);
            a = b, b = d.r1;
        } else {
            coeffs.push_back(d.q1);
            coeffs.push_back(d.q2);
            a = d.r1, b = d.r2;
        }
    }
    return make_expansion(std::move(coeffs));
}

// g_k = (p_k, p_{k-1}; q_k, q_{k-1}) sends 0 to the previous cusp and infinity to the next one.
inline std::vector<Mat2> cusp_chain(const CFExpansion& e) {
    if (e.coeffs.empty()) fail(errc::precondition, "empty expansion");
    std::int64_t D = e.coeffs.front().D();
    std::vector<Mat2> out;
    FieldElement pp(D, 1), qp(D, 0);
    for (const auto& [p, q] : e.convergents) {
        Mat2 g{p, pp, q, qp};
        FieldElement dt = g.det();
        if (dt == FieldElement(D, -1)) {
            g.b = -g.b;
            g.d = -g.d;
        } else if (!(dt == FieldElement(D, 1))) {
            fail(errc::invariant_violation, "convergent determinant is not +-1");
        }
        out.push_back(g);
        pp = p, qp = q;
    }
    return out;
}

// ---- regions of a semi-definite integral ---------------------------------------

template <class R> struct ChainRegions {
    std::vector<Region<R>> regions; // all with coefficient +1
    R eps_min{};
};

// int^tau int_0^oo = int_{1-1/tau}^{tau-1} int_0^oo, split at tau3 on the inner axis.
template <class R> void phi_regions(const complex_t<R>& tau, const complex_t<R>& tau3, std::vector<Region<R>>& out) {
    const complex_t<R> one(1);
    complex_t<R> m = one - tau;
    complex_t<R> s3 = -one / tau3;
    out.push_back({Limit<R>(tau / m), Limit<R>(one / m), Limit<R>::infinity(), Limit<R>(s3)});
    out.push_back({Limit<R>(one - one / tau), Limit<R>(tau - one), Limit<R>(tau3), Limit<R>::infinity()});
}

template <class R>
ChainRegions<R> chain_regions(const RealQuadField& F, const std::vector<Mat2>& chain, const complex_t<R>& tau0,
                              const complex_t<R>& tau3) {
    ChainRegions<R> cr;
    for (const auto& g : chain) {
        complex_t<R> t = act_uhp(embed<R>(F, g.adjugate(), 0), tau0);
        phi_regions(t, tau3, cr.regions);
    }
    bool first = true;
    for (const auto& r : cr.regions) {
        R e = epsilon(r);
        if (first || e < cr.eps_min) cr.eps_min = e;
        first = false;
    }
    return cr;
}

struct ExpansionChoice {
    CFExpansion expansion;
    long double eps_min = 0;
    std::size_t n_regions = 0;
};

template <class R>
ExpansionChoice select_best_expansion(const RealQuadField& F, const std::vector<CFExpansion>& candidates,
                                      const complex_t<R>& tau0, const complex_t<R>& tau3) {
    if (candidates.empty()) fail(errc::precondition, "no candidate expansions");
    std::vector<long double> eps(candidates.size());
    std::vector<std::size_t> count(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto cr = chain_regions<R>(F, cusp_chain(candidates[i]), tau0, tau3);
        eps[i] = static_cast<long double>(cr.eps_min);
        count[i] = cr.regions.size();
    }
    auto lex = [](const CFExpansion& x, const CFExpansion& y) {
        return std::lexicographical_compare(x.coeffs.begin(), x.coeffs.end(), y.coeffs.begin(), y.coeffs.end(),
                                            [](const FieldElement& p, const FieldElement& q) {
                                                return std::make_pair(p.a(), p.b()) < std::make_pair(q.a(), q.b());
                                            });
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (eps[i] != eps[best]) {
            if (eps[i] > eps[best]) best = i;
        } else if (count[i] != count[best]) {
            if (count[i] < count[best]) best = i;
        } else if (lex(candidates[i], candidates[best])) {
            best = i;
        }
    }
    return {candidates[best], eps[best], count[best]};
}

} // namespace atr
