#pragma once

#include <map>
#include <random>
#include <vector>

#include "phigamma/laurent.hpp"
#include "phigamma/witt.hpp"

namespace phigamma::oracle {

inline TruncatedLaurent random_laurent(std::mt19937_64& rng, u64 p, int N, int lo, int hi) {
    TruncatedLaurent f(p, N, lo, hi, false);
    const u64 q = ipow(p, N);
    for (int k = lo; k <= hi; ++k) f.set(k, PAdic(p, N, rng() % q));
    return f;
}

inline i64 binom(i64 n, i64 k) {
    if (k < 0 || k > n) return 0;
    i64 r = 1;
    for (i64 i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

/// Polynomials in X modulo X^p - 1 and p^N.
struct CycPoly {
    u64 p, q;
    std::vector<u64> c;
    CycPoly(u64 p_, u64 q_) : p(p_), q(q_), c(p_, 0) {}
    CycPoly mul(const CycPoly& o) const {
        CycPoly r(p, q);
        for (u64 i = 0; i < p; ++i)
            for (u64 j = 0; j < p; ++j)
                r.c[(i + j) % p] = static_cast<u64>((r.c[(i + j) % p] + static_cast<unsigned __int128>(c[i]) * o.c[j]) % q);
        return r;
    }
    bool zero() const {
        for (u64 x : c)
            if (x) return false;
        return true;
    }
};

/**
 * sum over zeta^p = 1 of (zeta (1 + pi) - 1)^j.  Positive j expands
 * binomially; negative j expands in pi^{-1}, which converges p-adically
 * because zeta - 1 is topologically nilpotent.
 */
inline TruncatedLaurent trace_oracle(u64 p, int N, int j) {
    const u64 q = ipow(p, N);
    std::map<int, u64> out;
    auto addto = [&](int e, i64 v) {
        i64 r = v % static_cast<i64>(q);
        if (r < 0) r += static_cast<i64>(q);
        out[e] = (out[e] + static_cast<u64>(r)) % q;
    };
    if (j >= 0) {
        for (int k = 0; k <= j; k += static_cast<int>(p)) {
            const i64 s = ((j - k) % 2 ? -1 : 1) * binom(j, k) % static_cast<i64>(q);
            for (int i = 0; i <= k; ++i) addto(i, static_cast<i64>(static_cast<__int128>(s) * binom(k, i) % q * static_cast<i64>(p) % q));
        }
    } else {
        const int m = -j;
        CycPoly xm1(p, q);
        xm1.c[0] = q - 1;
        xm1.c[1 % p] = (xm1.c[1 % p] + 1) % q;
        CycPoly pw(p, q);
        pw.c[0] = 1;
        for (int k = 0; k < 400 && !pw.zero(); ++k) {
            // C(-m, k) = (-1)^k C(m + k - 1, k), taken mod q by Pascal rows.
            std::vector<u64> row(static_cast<std::size_t>(k + 1), 0);
            std::vector<u64> prev{1};
            for (int n = 1; n <= m + k - 1; ++n) {
                std::vector<u64> cur(static_cast<std::size_t>(n + 1), 1);
                for (int i = 1; i < n; ++i) cur[static_cast<std::size_t>(i)] = (prev[static_cast<std::size_t>(i - 1)] + prev[static_cast<std::size_t>(i)]) % q;
                prev = cur;
            }
            const u64 b = prev[static_cast<std::size_t>(k)];
            const u64 bk = (k % 2) ? (q - b) % q : b;
            // Coefficient of X^0 in (X - 1)^k X^{-k-m}: entry at index (k + m) mod p.
            const u64 c0 = pw.c[static_cast<std::size_t>((k + m) % static_cast<int>(p))];
            addto(-k - m, static_cast<i64>(static_cast<unsigned __int128>(bk) * c0 % q * p % q));
            pw = pw.mul(xm1);
        }
    }
    int lo = out.begin()->first, hi = out.rbegin()->first;
    TruncatedLaurent f(p, N, lo, hi, false);
    for (auto& [e, v] : out) f.set(e, PAdic(p, N, v));
    return f;
}

inline PerfLaurent random_perf(std::mt19937_64& rng, u64 p, int level, int span) {
    PerfLaurent x(p);
    x.level = level;
    for (int k = 0; k <= span; ++k)
        if (rng() % 2) x.terms[k] = rng() % p;
    x.normalize();
    return x;
}

inline WittVector random_witt(std::mt19937_64& rng, u64 p, int length) {
    WittVector w = witt_zero(p, length);
    for (auto& c : w.comps) c = random_perf(rng, p, static_cast<int>(rng() % 2), 3);
    return w;
}

}  // namespace phigamma::oracle
