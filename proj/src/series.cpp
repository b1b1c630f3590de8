#include "phigamma/series.hpp"

#include <algorithm>
#include <climits>
#include <tuple>

namespace phigamma {

void ZL::trim() {
    std::size_t a = 0, b = c.size();
    while (a < b && c[a] == 0) ++a;
    while (b > a && c[b - 1] == 0) --b;
    if (a == b) {
        c.clear();
        lo = 0;
        return;
    }
    lo += static_cast<int>(a);
    c = std::vector<u64>(c.begin() + static_cast<long>(a), c.begin() + static_cast<long>(b));
}

int ZL::valuation() const {
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) return lo + static_cast<int>(i);
    return INT_MAX;
}

int gamma_guard(u64 p) {
    int k = 0;
    u64 x = 1;
    while (x < static_cast<u64>(kWindowCap)) {
        x *= p;
        ++k;
    }
    return k + 1;
}

SeriesRing::SeriesRing(u64 p, int N) : R_(p, N), RM_(p, N + gamma_guard(p)) {
    u128 m = static_cast<u128>(R_.q - 1) * (R_.q - 1);
    u128 lim = m ? (~static_cast<u128>(0)) / m : 1;
    acc_limit_ = static_cast<int>(std::min<u128>(lim, u128(1) << 30));
    if (acc_limit_ < 1) acc_limit_ = 1;
    // phi(pi) = (1+pi)^p - 1
    phipi_.lo = 1;
    for (u64 k = 1; k <= p; ++k) phipi_.c.push_back(binom(static_cast<int>(p), static_cast<int>(k)));
    // z = sum_{0<k<p} C(p,k) pi^{k-p};  (1+z)^{-1} = sum_{j<N} (-z)^j
    ZL mz;
    mz.lo = 1 - static_cast<int>(p);
    for (u64 k = 1; k < p; ++k) mz.c.push_back(R_.neg(binom(static_cast<int>(p), static_cast<int>(k))));
    ZL tot = ZL::mono(0), t = ZL::mono(0);
    for (int j = 1; j < N; ++j) {
        t = mul(t, mz);
        tot = add(tot, t);
    }
    tot.lo -= static_cast<int>(p);
    tot.trim();
    phipi_inv_ = tot;
}

ZL SeriesRing::add(const ZL& a, const ZL& b) const {
    if (a.empty()) return b;
    if (b.empty()) return a;
    ZL r;
    r.lo = std::min(a.lo, b.lo);
    int hi = std::max(a.hi(), b.hi());
    r.c.assign(static_cast<std::size_t>(hi - r.lo + 1), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i + static_cast<std::size_t>(a.lo - r.lo)] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) {
        auto& x = r.c[i + static_cast<std::size_t>(b.lo - r.lo)];
        x = R_.add(x, b.c[i]);
    }
    r.trim();
    return r;
}

ZL SeriesRing::scale(const ZL& a, u64 s) const {
    ZL r = a;
    for (auto& x : r.c) x = R_.mul(x, s);
    r.trim();
    return r;
}

ZL SeriesRing::sub(const ZL& a, const ZL& b) const { return add(a, scale(b, R_.q - 1)); }

ZL SeriesRing::mul(const ZL& a, const ZL& b, int top) const {
    ZL r;
    if (a.empty() || b.empty()) return r;
    r.lo = a.lo + b.lo;
    int hi = std::min(a.hi() + b.hi(), top - 1);
    if (hi < r.lo) return ZL{};
    std::size_t n = static_cast<std::size_t>(hi - r.lo + 1);
    r.c.assign(n, 0);
    const std::size_t na = a.c.size(), nb = b.c.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i0 = k >= nb - 1 ? k - (nb - 1) : 0;
        std::size_t i1 = std::min(k, na - 1);
        u128 acc = 0;
        int cnt = 0;
        u64 out = 0;
        for (std::size_t i = i0; i <= i1; ++i) {
            u64 x = a.c[i];
            if (!x) continue;
            acc += static_cast<u128>(x) * b.c[k - i];
            if (++cnt == acc_limit_) {
                out = R_.add(out, static_cast<u64>(acc % R_.q));
                acc = 0;
                cnt = 0;
            }
        }
        r.c[k] = R_.add(out, static_cast<u64>(acc % R_.q));
    }
    r.trim();
    return r;
}

ZL SeriesRing::mul(const ZL& a, const ZL& b) const { return mul(a, b, INT_MAX); }

ZL SeriesRing::pow(const ZL& a, u64 e, int top) const {
    ZL r = ZL::mono(0), b = a;
    while (e) {
        if (e & 1) r = mul(r, b, top);
        e >>= 1;
        if (e) b = mul(b, b, top);
    }
    return r;
}

ZL SeriesRing::invert(const ZL& a, int top) const {
    int m = a.valuation();
    if (m == INT_MAX) throw PreconditionError("inverse of zero series");
    u64 c0 = a.at(m);
    if (c0 % R_.p == 0) throw PreconditionError("leading coefficient is not a unit");
    u64 ic = R_.inv(c0);
    int len = top + m;  // coefficients of u^{-1} needed
    ZL r;
    r.lo = -m;
    if (len <= 0) return ZL{};
    std::vector<u64> inv(static_cast<std::size_t>(len), 0);
    inv[0] = ic;
    for (int n = 1; n < len; ++n) {
        u128 acc = 0;
        u64 s = 0;
        int cnt = 0;
        for (int k = 1; k <= n; ++k) {
            u64 uk = a.at(m + k);
            if (!uk) continue;
            acc += static_cast<u128>(uk) * inv[static_cast<std::size_t>(n - k)];
            if (++cnt == acc_limit_) {
                s = R_.add(s, static_cast<u64>(acc % R_.q));
                acc = 0;
                cnt = 0;
            }
        }
        s = R_.add(s, static_cast<u64>(acc % R_.q));
        inv[static_cast<std::size_t>(n)] = R_.mul(R_.neg(s), ic);
    }
    r.c = std::move(inv);
    r.trim();
    return r;
}

void SeriesRing::ensure_pascal(int n) {
    while (static_cast<int>(pascal_.size()) <= n) {
        int k = static_cast<int>(pascal_.size());
        std::vector<u64> row(static_cast<std::size_t>(k + 1), 1);
        for (int i = 1; i < k; ++i)
            row[static_cast<std::size_t>(i)] =
                R_.add(pascal_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)],
                       pascal_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)]);
        pascal_.push_back(std::move(row));
    }
}

u64 SeriesRing::binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    ensure_pascal(n);
    return pascal_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

const ZL& SeriesRing::phi_mono(int k) {
    auto it = phi_cache_.find(k);
    if (it != phi_cache_.end()) return it->second;
    ZL r;
    if (k == 0) {
        r = ZL::mono(0);
    } else if (k > 0) {
        r = mul(phi_mono(k - 1), phipi_);
    } else {
        r = mul(phi_mono(k + 1), phipi_inv_);
    }
    return phi_cache_[k] = r;
}

ZL SeriesRing::phi(const ZL& f) {
    ZL out;
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        if (!f.c[i]) continue;
        out = add(out, scale(phi_mono(f.lo + static_cast<int>(i)), f.c[i]));
    }
    return out;
}

const ZL& SeriesRing::psi_mono(int k) {
    auto it = psi_cache_.find(k);
    if (it != psi_cache_.end()) return it->second;
    ZL r;
    const int p = static_cast<int>(R_.p);
    if (k >= 0) {
        // psi(pi^k) = sum_j C(k, pj) (-1)^{k-pj} (1+pi)^j
        std::vector<u64> acc(static_cast<std::size_t>(k / p + 1), 0);
        for (int j = 0; p * j <= k; ++j) {
            u64 coef = binom(k, p * j);
            if ((k - p * j) & 1) coef = R_.neg(coef);
            if (!coef) continue;
            for (int e = 0; e <= j; ++e)
                acc[static_cast<std::size_t>(e)] =
                    R_.add(acc[static_cast<std::size_t>(e)], R_.mul(coef, binom(j, e)));
        }
        r.lo = 0;
        r.c = std::move(acc);
    } else {
        // psi(pi^{-m}) = pi^{-m} psi((phi(pi)/pi)^m)
        int m = -k;
        ZL base = phipi_;
        base.lo -= 1;
        ZL q = pow(base, static_cast<u64>(m), INT_MAX);
        ZL s;
        for (std::size_t i = 0; i < q.c.size(); ++i) {
            if (!q.c[i]) continue;
            s = add(s, scale(psi_mono(q.lo + static_cast<int>(i)), q.c[i]));
        }
        s.lo -= m;
        r = s;
    }
    r.trim();
    return psi_cache_[k] = r;
}

ZL SeriesRing::psi(const ZL& f) {
    ZL out;
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        if (!f.c[i]) continue;
        out = add(out, scale(psi_mono(f.lo + static_cast<int>(i)), f.c[i]));
    }
    return out;
}

ZL SeriesRing::gamma_pi(u64 c, int top) const {
    // (1+pi)^c with c reduced mod p^M; (1+pi)^{p^M} = 1 below the window cap.
    ZL one_plus{0, {1, 1}};
    ZL r = pow(one_plus, c % RM_.q, top);
    if (!r.empty() && r.lo == 0) r.c[0] = R_.sub(r.c[0], 1);
    r.trim();
    return r;
}

const std::vector<ZL>& SeriesRing::gamma_table(u64 c, int kmin, int top) {
    auto key = std::make_tuple(c % RM_.q, kmin, top);
    auto it = gamma_cache_.find(key);
    if (it != gamma_cache_.end()) return it->second;
    if (top > kWindowCap || -kmin > kWindowCap) throw PreconditionError("window exceeds cap");
    int K = std::max(0, -kmin);
    ZL gp = gamma_pi(c, top + K + 2);
    std::vector<ZL> tab(static_cast<std::size_t>(std::max(0, top - kmin)));
    if (top > kmin) {
        ZL cur = ZL::mono(0);
        for (int k = 0; k < top; ++k) {
            if (k > 0) cur = mul(cur, gp, top);
            if (k >= kmin) tab[static_cast<std::size_t>(k - kmin)] = cur;
        }
        if (K > 0) {
            // gamma(pi^{-K}) = pi^{-K} w^K with w = pi / gamma(pi), then step down by gamma(pi).
            ZL w = invert(gp, top + K - 1);
            w.lo += 1;
            ZL v = pow(w, static_cast<u64>(K), top + K);
            v.lo -= K;
            v = mul(v, ZL::mono(0), top);
            for (int k = K; k >= 1; --k) {
                if (k < K) v = mul(v, gp, top);
                if (-k >= kmin) tab[static_cast<std::size_t>(-k - kmin)] = v;
            }
        }
    }
    return gamma_cache_[key] = std::move(tab);
}

std::shared_ptr<SeriesRing> series_ring(u64 p, int N) {
    static std::mutex mu;
    static std::map<std::pair<u64, int>, std::shared_ptr<SeriesRing>> rings;
    std::lock_guard<std::mutex> lock(mu);
    auto& r = rings[{p, N}];
    if (!r) r = std::make_shared<SeriesRing>(p, N);
    return r;
}

}  // namespace phigamma
