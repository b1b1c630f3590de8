#include "phigamma/zq.hpp"

namespace phigamma {

u64 ipow(u64 b, int e) {
    u64 r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > (u64(1) << 62) / b) throw PreconditionError("p^N exceeds 2^62");
        r *= b;
    }
    return r;
}

int vp(i64 x, u64 p) {
    if (x == 0) return 1 << 30;
    int v = 0;
    u64 y = x < 0 ? u64(-(x + 1)) + 1 : u64(x);
    while (y % p == 0) {
        y /= p;
        ++v;
    }
    return v;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

u64 primitive_root(u64 p) {
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        u64 m = p - 1;
        for (u64 r = 2; r <= m; ++r) {
            if (m % r) continue;
            bool prime = is_prime(r);
            if (!prime) continue;
            u64 x = 1, e = m / r, b = g;
            while (e) {
                if (e & 1) x = x * b % p;
                b = b * b % p;
                e >>= 1;
            }
            if (x == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    return 1;
}

Zq::Zq(u64 p_, int N_) : p(p_), N(N_) {
    if (N < 1) throw PreconditionError("precision must be positive");
    q = ipow(p, N);
}

u64 Zq::from(i64 x) const {
    i64 r = x % static_cast<i64>(q);
    return r < 0 ? static_cast<u64>(r + static_cast<i64>(q)) : static_cast<u64>(r);
}

u64 Zq::pow(u64 a, u64 e) const {
    u64 r = 1 % q;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

u64 Zq::inv(u64 a) const {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(q), nr = static_cast<i64>(a % q);
    while (nr) {
        i64 k = r / nr;
        i64 tmp = t - k * nt;
        t = nt;
        nt = tmp;
        tmp = r - k * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw PreconditionError("inverse of a non-unit");
    return from(t);
}

int Zq::val(u64 a) const {
    if (a % q == 0) return N;
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

u64 Zq::ppow(int k) const {
    if (k >= N) return 0;
    u64 r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

i64 centered(const Zq& R, u64 a) {
    return a > R.q / 2 ? static_cast<i64>(a) - static_cast<i64>(R.q) : static_cast<i64>(a);
}

}  // namespace phigamma
