#pragma once

#include "atr/core/parallel.hpp"
#include "atr/ecdata/curve.hpp"

#include <cstring>
#include <fstream>
#include <string>
#include <unordered_map>

namespace atr {

struct CoeffTable {
    std::int64_t D = 0;
    std::array<OElt, 5> curve{}; // a1, a2, a3, a4, a6
    std::int64_t N_max = 0;
    std::vector<std::int64_t> coeffs; // canonical ideal order, see enumerate_ideals

    friend bool operator==(const CoeffTable&, const CoeffTable&) = default;
};

inline std::int64_t prime_power_coefficient(std::int64_t a_p, std::int64_t normP, int e) {
    std::int64_t prev = 1, cur = a_p;
    if (e == 0) return 1;
    for (int k = 2; k <= e; ++k) {
        std::int64_t next = a_p * cur - normP * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline std::vector<std::int64_t> prime_ap_values(const RealQuadField& F, const CurveOverF& E,
                                                 const std::vector<PrimeIdealRep>& primes, int threads) {
    std::vector<std::int64_t> out(primes.size());
    parallel_for(primes.size(), threads, [&](std::size_t i) { out[i] = ap(F, E, primes[i]); });
    return out;
}

inline CoeffTable build_table(const RealQuadField& F, const CurveOverF& E, std::int64_t N, int threads = 1,
                              IdealList* ideals_out = nullptr) {
    require(N >= 1, "build_table needs N >= 1");
    IdealList L = enumerate_ideals(F, N);
    std::vector<std::int64_t> aP = prime_ap_values(F, E, L.primes, threads);
    CoeffTable T;
    T.D = F.D;
    auto cs = E.coeffs();
    for (int i = 0; i < 5; ++i) T.curve[i] = to_oelt(cs[i]);
    T.N_max = N;
    T.coeffs.resize(L.ideals.size());
    for (std::size_t j = 0; j < L.ideals.size(); ++j) {
        std::int64_t v = 1;
        for (auto [idx, e] : L.ideals[j].factorization)
            v *= prime_power_coefficient(aP[idx], L.primes[idx].norm(), e);
        T.coeffs[j] = v;
    }
    if (ideals_out) *ideals_out = std::move(L);
    return T;
}

// ---- cache file -------------------------------------------------------------
// header: "ATRCOEF\0", u32 version, u32 zero, i64 D, 10 x i64 curve coordinates,
// i64 N_max, u64 count, u64 FNV-1a checksum of everything else; then count x i64.

inline constexpr std::uint32_t kCacheVersion = 1;
inline constexpr char kCacheMagic[8] = {'A', 'T', 'R', 'C', 'O', 'E', 'F', '\0'};

inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL) {
    auto p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

namespace detail {
inline std::vector<std::int64_t> header_words(const CoeffTable& t) {
    std::vector<std::int64_t> w{t.D};
    for (const auto& c : t.curve) {
        w.push_back(c.a);
        w.push_back(c.b);
    }
    w.push_back(t.N_max);
    w.push_back(static_cast<std::int64_t>(t.coeffs.size()));
    return w;
}
inline std::uint64_t checksum(const CoeffTable& t) {
    auto w = header_words(t);
    std::uint64_t h = fnv1a(w.data(), w.size() * sizeof(std::int64_t));
    return fnv1a(t.coeffs.data(), t.coeffs.size() * sizeof(std::int64_t), h);
}
} // namespace detail

inline void save_table(const CoeffTable& t, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(errc::corrupt_cache, "cannot write " + tmp);
        out.write(kCacheMagic, 8);
        std::uint32_t v[2] = {kCacheVersion, 0};
        out.write(reinterpret_cast<const char*>(v), sizeof v);
        auto w = detail::header_words(t);
        out.write(reinterpret_cast<const char*>(w.data()), static_cast<std::streamsize>(w.size() * 8));
        std::uint64_t h = detail::checksum(t);
        out.write(reinterpret_cast<const char*>(&h), 8);
        out.write(reinterpret_cast<const char*>(t.coeffs.data()), static_cast<std::streamsize>(t.coeffs.size() * 8));
        if (!out) fail(errc::corrupt_cache, "short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) fail(errc::corrupt_cache, "cannot move cache into place: " + path);
}

inline CoeffTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::corrupt_cache, "cannot open " + path);
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kCacheMagic, 8) != 0) fail(errc::corrupt_cache, "bad magic in " + path);
    std::uint32_t v[2];
    if (!in.read(reinterpret_cast<char*>(v), sizeof v)) fail(errc::corrupt_cache, "truncated header");
    if (v[0] != kCacheVersion)
        fail(errc::version_mismatch, "cache version " + std::to_string(v[0]) + ", expected " + std::to_string(kCacheVersion));
    std::int64_t w[13];
    std::uint64_t h;
    if (!in.read(reinterpret_cast<char*>(w), sizeof w) || !in.read(reinterpret_cast<char*>(&h), 8))
        fail(errc::corrupt_cache, "truncated header");
    CoeffTable t;
    t.D = w[0];
    for (int i = 0; i < 5; ++i) t.curve[i] = {w[1 + 2 * i], w[2 + 2 * i]};
    t.N_max = w[11];
    std::int64_t count = w[12];
    if (count < 0 || count > (std::int64_t(1) << 40)) fail(errc::corrupt_cache, "implausible entry count");
    t.coeffs.resize(static_cast<size_t>(count));
    if (!in.read(reinterpret_cast<char*>(t.coeffs.data()), count * 8)) fail(errc::corrupt_cache, "truncated payload");
    if (in.peek() != std::char_traits<char>::eof()) fail(errc::corrupt_cache, "trailing bytes");
    if (detail::checksum(t) != h) fail(errc::corrupt_cache, "checksum mismatch");
    return t;
}

// Entries of a larger table restricted to norm <= N (canonical order is by norm first).
inline CoeffTable truncate_table(const CoeffTable& t, const IdealList& L, std::int64_t N) {
    CoeffTable r = t;
    r.N_max = std::min(N, t.N_max);
    std::size_t k = 0;
    while (k < L.ideals.size() && k < t.coeffs.size() && L.ideals[k].norm <= r.N_max) ++k;
    r.coeffs.resize(k);
    return r;
}

inline bool table_matches(const CoeffTable& t, const RealQuadField& F, const CurveOverF& E) {
    if (t.D != F.D) return false;
    auto cs = E.coeffs();
    for (int i = 0; i < 5; ++i)
        if (!(to_oelt(cs[i]) == t.curve[i])) return false;
    return true;
}

} // namespace atr
