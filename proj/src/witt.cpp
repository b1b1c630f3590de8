#include "phigamma/witt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace phigamma {

Rational::Rational(i64 n, i64 d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i64 g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
}

Rational Rational::operator+(const Rational& o) const { return Rational(num * o.den + o.num * den, den * o.den); }
Rational Rational::operator-(const Rational& o) const { return Rational(num * o.den - o.num * den, den * o.den); }
Rational Rational::operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }
bool Rational::operator<(const Rational& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}
std::string Rational::str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

namespace {

i64 scale_hi(i64 hi, i64 f) { return hi >= PerfLaurent::kExact ? hi : hi * f; }

std::pair<PerfLaurent, PerfLaurent> align(const PerfLaurent& a, const PerfLaurent& b) {
    if (a.p != b.p) throw PreconditionError("mixed primes");
    int L = std::max(a.level, b.level);
    return {a.at_level(L), b.at_level(L)};
}

i64 low_num(const PerfLaurent& a) { return a.is_zero() ? a.hi : a.terms.begin()->first; }

u64 inv_mod_p(u64 a, u64 p) {
    Zq F(p, 1);
    return F.inv(a % p);
}

}  // namespace

PerfLaurent PerfLaurent::monomial(u64 p, i64 num, int level, u64 c) {
    PerfLaurent x(p);
    x.level = level;
    if (c % p) x.terms[num] = c % p;
    x.normalize();
    return x;
}

PerfLaurent PerfLaurent::unknown_above(u64 p, i64 cap) {
    PerfLaurent x(p);
    x.hi = cap;
    return x;
}

PerfLaurent PerfLaurent::at_level(int L) const {
    if (L < level) throw std::logic_error("at_level cannot lower the level");
    if (L == level) return *this;
    const i64 f = static_cast<i64>(ipow(p, L - level));
    PerfLaurent out(p);
    out.level = L;
    out.hi = scale_hi(hi, f);
    for (auto& [k, c] : terms) out.terms.emplace(k * f, c);
    return out;
}

void PerfLaurent::normalize() {
    for (auto it = terms.begin(); it != terms.end();) {
        if (it->second % p == 0 || it->first >= hi)
            it = terms.erase(it);
        else
            ++it;
    }
    const i64 P = static_cast<i64>(p);
    while (level > 0) {
        if (!exact() && hi % P != 0) break;
        bool ok = std::all_of(terms.begin(), terms.end(), [&](auto& t) { return t.first % P == 0; });
        if (!ok) break;
        std::map<i64, u64> t2;
        for (auto& [k, c] : terms) t2.emplace(k / P, c);
        terms.swap(t2);
        if (!exact()) hi /= P;
        --level;
    }
    if (terms.empty() && exact()) level = 0;
}

Rational PerfLaurent::lowest() const {
    if (is_zero()) throw PreconditionError("valuation of zero");
    return Rational(terms.begin()->first, static_cast<i64>(ipow(p, level)));
}

u64 PerfLaurent::coeff(i64 num, int lv) const {
    int L = std::max(lv, level);
    i64 k = num * static_cast<i64>(ipow(p, L - lv));
    i64 f = static_cast<i64>(ipow(p, L - level));
    if (k % f) return 0;
    auto it = terms.find(k / f);
    return it == terms.end() ? 0 : it->second;
}

nlohmann::json PerfLaurent::to_json() const {
    auto ts = nlohmann::json::array();
    for (auto& [k, c] : terms) {
        i64 n = k;
        int d = level;
        while (d > 0 && n % static_cast<i64>(p) == 0) {
            n /= static_cast<i64>(p);
            --d;
        }
        ts.push_back({n, d, c});
    }
    nlohmann::json j = {{"p", p}, {"level", level}, {"terms", ts}};
    j["hi"] = exact() ? nlohmann::json(nullptr) : nlohmann::json({hi, level});
    return j;
}

PerfLaurent perf_add(const PerfLaurent& a0, const PerfLaurent& b0) {
    auto [a, b] = align(a0, b0);
    PerfLaurent out = a;
    out.hi = std::min(a.hi, b.hi);
    for (auto& [k, c] : b.terms) out.terms[k] = (out.terms[k] + c) % a.p;
    out.normalize();
    return out;
}

PerfLaurent perf_scale(const PerfLaurent& a, u64 c) {
    PerfLaurent out = a;
    for (auto& [k, x] : out.terms) x = x * (c % a.p) % a.p;
    out.normalize();
    return out;
}

PerfLaurent perf_neg(const PerfLaurent& a) { return perf_scale(a, a.p - 1); }
PerfLaurent perf_sub(const PerfLaurent& a, const PerfLaurent& b) { return perf_add(a, perf_neg(b)); }

PerfLaurent perf_mul(const PerfLaurent& a0, const PerfLaurent& b0) {
    auto [a, b] = align(a0, b0);
    const u64 p = a.p;
    PerfLaurent out(p);
    out.level = a.level;
    if ((a.is_zero() && a.exact()) || (b.is_zero() && b.exact())) {
        out.level = 0;
        return out;
    }
    i64 hi = PerfLaurent::kExact;
    if (!a.exact()) hi = std::min(hi, a.hi + low_num(b));
    if (!b.exact()) hi = std::min(hi, b.hi + low_num(a));
    out.hi = hi;
    if (a.is_zero() || b.is_zero()) {
        out.normalize();
        return out;
    }
    const i64 lo = a.terms.begin()->first + b.terms.begin()->first;
    i64 top = a.terms.rbegin()->first + b.terms.rbegin()->first;
    if (hi < PerfLaurent::kExact) top = std::min(top, hi - 1);
    if (top < lo) {
        out.normalize();
        return out;
    }
    std::vector<u64> acc(static_cast<std::size_t>(top - lo + 1), 0);
    for (auto& [i, x] : a.terms) {
        for (auto& [j, y] : b.terms) {
            i64 k = i + j;
            if (k > top) break;
            u64& s = acc[static_cast<std::size_t>(k - lo)];
            s += x * y;
            if (s >= (u64(1) << 62)) s %= p;
        }
    }
    for (std::size_t i = 0; i < acc.size(); ++i)
        if (acc[i] % p) out.terms.emplace(lo + static_cast<i64>(i), acc[i] % p);
    out.normalize();
    return out;
}

PerfLaurent perf_invert(const PerfLaurent& a, i64 cap) {
    if (a.is_zero()) throw PreconditionError("inverse of zero");
    const u64 p = a.p;
    const int L = a.level;
    const i64 v = a.terms.begin()->first;
    const u64 cinv = inv_mod_p(a.terms.begin()->second, p);
    i64 hi = cap * static_cast<i64>(ipow(p, L));
    if (!a.exact()) hi = std::min(hi, a.hi - 2 * v);
    PerfLaurent out(p);
    out.level = L;
    out.hi = hi;
    const i64 n = hi + v;
    if (n <= 0) {
        out.normalize();
        return out;
    }
    std::vector<std::pair<i64, u64>> rest;
    for (auto& [k, c] : a.terms)
        if (k > v) rest.emplace_back(k - v, c);
    std::vector<u64> y(static_cast<std::size_t>(n), 0);
    y[0] = cinv;
    for (i64 i = 1; i < n; ++i) {
        u64 s = 0;
        for (auto& [d, c] : rest) {
            if (d > i) break;
            s = (s + c * y[static_cast<std::size_t>(i - d)]) % p;
        }
        y[static_cast<std::size_t>(i)] = (p - s) % p * cinv % p;
    }
    for (i64 i = 0; i < n; ++i)
        if (y[static_cast<std::size_t>(i)]) out.terms.emplace(i - v, y[static_cast<std::size_t>(i)]);
    out.normalize();
    return out;
}

PerfLaurent perf_pow(const PerfLaurent& a, i64 e, i64 cap) {
    PerfLaurent base = e < 0 ? perf_invert(a, cap) : a;
    u64 k = static_cast<u64>(e < 0 ? -e : e);
    PerfLaurent r = PerfLaurent::monomial(a.p, 0, 0, 1);
    while (k) {
        if (k & 1) r = perf_mul(r, base);
        k >>= 1;
        if (k) base = perf_mul(base, base);
    }
    return r;
}

PerfLaurent perf_frobenius(const PerfLaurent& a) {
    PerfLaurent out(a.p);
    out.level = a.level;
    const i64 P = static_cast<i64>(a.p);
    out.hi = scale_hi(a.hi, P);
    for (auto& [k, c] : a.terms) out.terms.emplace(k * P, c);
    out.normalize();
    return out;
}

PerfLaurent perf_root(const PerfLaurent& a) {
    PerfLaurent out = a;
    out.level = a.level + 1;
    out.normalize();
    return out;
}

bool perf_equal(const PerfLaurent& a0, const PerfLaurent& b0) {
    auto [a, b] = align(a0, b0);
    const i64 h = std::min(a.hi, b.hi);
    auto ia = a.terms.begin(), ib = b.terms.begin();
    while (true) {
        while (ia != a.terms.end() && ia->first >= h) ia = a.terms.end();
        while (ib != b.terms.end() && ib->first >= h) ib = b.terms.end();
        if (ia == a.terms.end() || ib == b.terms.end()) return ia == a.terms.end() && ib == b.terms.end();
        if (ia->first != ib->first || ia->second != ib->second) return false;
        ++ia;
        ++ib;
    }
}

PerfLaurent perf_gamma(const PerfLaurent& a, i64 c, i64 cap) {
    const u64 p = a.p;
    if (c % static_cast<i64>(p) == 0) throw PreconditionError("gamma needs a unit exponent");
    PerfLaurent one = PerfLaurent::monomial(p, 0, 0, 1);
    PerfLaurent b = perf_sub(perf_pow(perf_add(one, PerfLaurent::monomial(p, 1, 0, 1)), c, cap), one);
    for (int i = 0; i < a.level; ++i) b = perf_root(b);
    PerfLaurent acc(p);
    acc.level = a.level;
    if (!a.exact()) acc.hi = a.hi;
    if (a.is_zero()) {
        acc.normalize();
        return acc;
    }
    const i64 lo = a.terms.begin()->first, top = a.terms.rbegin()->first;
    PerfLaurent pw = perf_pow(b, lo, cap);
    for (i64 k = lo; k <= top; ++k) {
        u64 x = a.coeff(k, a.level);
        if (x) acc = perf_add(acc, perf_scale(pw, x));
        if (k < top) pw = perf_mul(pw, b);
    }
    return acc;
}

Rational tilt_valuation(const PerfLaurent& x) {
    return x.lowest() * Rational(static_cast<i64>(x.p), static_cast<i64>(x.p) - 1);
}

// ---------------------------------------------------------------------------
// Witt vectors by ghost-component evaluation on coefficient lifts mod p^length.

namespace {

struct Lift {
    i64 lo = 0;
    std::vector<u64> c;
    i64 hi = PerfLaurent::kExact;

    bool exact() const { return hi >= PerfLaurent::kExact; }
    bool zero() const {
        return std::all_of(c.begin(), c.end(), [](u64 x) { return x == 0; });
    }
    i64 low() const {
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i]) return lo + static_cast<i64>(i);
        return hi;
    }
};

void trim(Lift& a) {
    if (!a.exact()) {
        i64 keep = a.hi - a.lo;
        if (keep < static_cast<i64>(a.c.size())) a.c.resize(static_cast<std::size_t>(std::max<i64>(keep, 0)));
    }
    while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
    std::size_t s = 0;
    while (s < a.c.size() && a.c[s] == 0) ++s;
    if (s) {
        a.c.erase(a.c.begin(), a.c.begin() + static_cast<std::ptrdiff_t>(s));
        a.lo += static_cast<i64>(s);
    }
}

Lift lift_of(const PerfLaurent& x, int L) {
    PerfLaurent y = x.at_level(L);
    Lift out;
    out.hi = y.hi;
    if (y.is_zero()) return out;
    out.lo = y.terms.begin()->first;
    out.c.assign(static_cast<std::size_t>(y.terms.rbegin()->first - out.lo + 1), 0);
    for (auto& [k, c] : y.terms) out.c[static_cast<std::size_t>(k - out.lo)] = c;
    return out;
}

Lift lift_add(const Lift& a, const Lift& b, u64 q, bool subtract = false) {
    Lift out;
    out.hi = std::min(a.hi, b.hi);
    if (a.c.empty() && b.c.empty()) return out;
    i64 lo = a.c.empty() ? b.lo : b.c.empty() ? a.lo : std::min(a.lo, b.lo);
    i64 top = std::max(a.c.empty() ? lo : a.lo + static_cast<i64>(a.c.size()),
                       b.c.empty() ? lo : b.lo + static_cast<i64>(b.c.size()));
    out.lo = lo;
    out.c.assign(static_cast<std::size_t>(top - lo), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) out.c[static_cast<std::size_t>(a.lo - lo) + i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) {
        u64& s = out.c[static_cast<std::size_t>(b.lo - lo) + i];
        s = subtract ? (s + q - b.c[i]) % q : (s + b.c[i]) % q;
    }
    trim(out);
    return out;
}

Lift lift_scale(const Lift& a, u64 f, u64 q) {
    Lift out = a;
    for (auto& x : out.c) x = static_cast<u64>(static_cast<u128>(x) * f % q);
    trim(out);
    return out;
}

Lift lift_mul(const Lift& a, const Lift& b, u64 q) {
    Lift out;
    if ((a.c.empty() && a.exact()) || (b.c.empty() && b.exact())) return out;
    i64 hi = PerfLaurent::kExact;
    if (!a.exact()) hi = std::min(hi, a.hi + b.low());
    if (!b.exact()) hi = std::min(hi, b.hi + a.low());
    out.hi = hi;
    if (a.c.empty() || b.c.empty()) return out;
    out.lo = a.lo + b.lo;
    i64 n = static_cast<i64>(a.c.size() + b.c.size()) - 1;
    if (hi < PerfLaurent::kExact) n = std::min(n, hi - out.lo);
    if (n <= 0) {
        out.c.clear();
        return out;
    }
    std::vector<u128> acc(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i]) continue;
        for (std::size_t j = 0; j < b.c.size() && static_cast<i64>(i + j) < n; ++j)
            acc[i + j] += static_cast<u128>(a.c[i]) * b.c[j];
    }
    out.c.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < acc.size(); ++i) out.c[i] = static_cast<u64>(acc[i] % q);
    trim(out);
    return out;
}

Lift lift_pow(Lift base, u64 e, u64 q) {
    Lift r;
    r.lo = 0;
    r.c = {1};
    while (e) {
        if (e & 1) r = lift_mul(r, base, q);
        e >>= 1;
        if (e) base = lift_mul(base, base, q);
    }
    return r;
}

void check_shape(const WittVector& x, const WittVector& y) {
    if (x.p != y.p || x.length != y.length) throw PreconditionError("Witt vectors of different shape");
}

void check_length(int len) {
    if (len < 1 || len > kMaxWittLength) throw PreconditionError("Witt length must lie in [1, 4]");
}

/// Multiply the value by p^k without changing the denominator.
WittVector times_p(WittVector x, int k) {
    for (int i = 0; i < k; ++i) x = witt_mul_p(x);
    return x;
}

WittVector ghost_op(const WittVector& x, const WittVector& y, bool mul) {
    check_shape(x, y);
    const u64 p = x.p;
    const int len = x.length;
    const u64 q = ipow(p, len);
    WittVector X = x, Y = y;
    WittVector out;
    out.p = p;
    out.length = len;
    if (mul) {
        out.denom_exp = x.denom_exp + y.denom_exp;
    } else {
        out.denom_exp = std::max(x.denom_exp, y.denom_exp);
        X = times_p(x, out.denom_exp - x.denom_exp);
        Y = times_p(y, out.denom_exp - y.denom_exp);
    }
    int L = 0;
    for (auto* v : {&X, &Y})
        for (auto& c : v->comps) L = std::max(L, c.level);
    std::vector<Lift> px, py, ps;
    for (int n = 0; n < len; ++n) {
        for (auto& t : px) t = lift_pow(t, p, q);
        for (auto& t : py) t = lift_pow(t, p, q);
        for (auto& t : ps) t = lift_pow(t, p, q);
        px.push_back(lift_of(X.comps[static_cast<std::size_t>(n)], L));
        py.push_back(lift_of(Y.comps[static_cast<std::size_t>(n)], L));
        Lift wx, wy;
        for (int i = 0; i <= n; ++i) {
            u64 pi = ipow(p, i);
            wx = lift_add(wx, lift_scale(px[static_cast<std::size_t>(i)], pi, q), q);
            wy = lift_add(wy, lift_scale(py[static_cast<std::size_t>(i)], pi, q), q);
        }
        Lift r = mul ? lift_mul(wx, wy, q) : lift_add(wx, wy, q);
        for (int i = 0; i < n; ++i) r = lift_add(r, lift_scale(ps[static_cast<std::size_t>(i)], ipow(p, i), q), q, true);
        const u64 pn = ipow(p, n);
        PerfLaurent comp(p);
        comp.level = L;
        comp.hi = r.hi;
        for (std::size_t i = 0; i < r.c.size(); ++i) {
            if (r.c[i] % pn) throw std::logic_error("ghost recovery lost divisibility");
            u64 v = (r.c[i] / pn) % p;
            if (v) comp.terms.emplace(r.lo + static_cast<i64>(i), v);
        }
        comp.normalize();
        out.comps.push_back(comp);
        ps.push_back(lift_of(comp, L));
    }
    return out;
}

}  // namespace

nlohmann::json WittVector::to_json() const {
    auto cs = nlohmann::json::array();
    for (auto& c : comps) cs.push_back(c.to_json());
    return {{"p", p}, {"length", length}, {"denom_exp", denom_exp}, {"components", cs}};
}

WittVector witt_zero(u64 p, int length) {
    check_length(length);
    WittVector w;
    w.p = p;
    w.length = length;
    w.comps.assign(static_cast<std::size_t>(length), PerfLaurent(p));
    return w;
}

WittVector teichmuller(const PerfLaurent& x, int length) {
    WittVector w = witt_zero(x.p, length);
    w.comps[0] = x;
    return w;
}

WittVector witt_one(u64 p, int length) { return teichmuller(PerfLaurent::monomial(p, 0, 0, 1), length); }

WittVector verschiebung(const WittVector& x) {
    WittVector w = x;
    w.comps.insert(w.comps.begin(), PerfLaurent(x.p));
    w.comps.pop_back();
    return w;
}

WittVector witt_frobenius(const WittVector& x) {
    WittVector w = x;
    for (auto& c : w.comps) c = perf_frobenius(c);
    return w;
}

WittVector witt_add(const WittVector& x, const WittVector& y) { return ghost_op(x, y, false); }
WittVector witt_mul(const WittVector& x, const WittVector& y) { return ghost_op(x, y, true); }

WittVector witt_neg(const WittVector& x) {
    if (x.p == 2) throw PreconditionError("p = 2 is not supported");
    WittVector w = x;
    for (auto& c : w.comps) c = perf_neg(c);
    return w;
}

WittVector witt_sub(const WittVector& x, const WittVector& y) { return witt_add(x, witt_neg(y)); }

WittVector witt_scalar(u64 p, int length, i64 c) {
    WittVector w = witt_zero(p, length);
    Zq R(p, length);
    u64 r = R.from(c);
    for (int i = 0; i < length; ++i) {
        u64 d = r % p;
        w.comps[static_cast<std::size_t>(i)] = PerfLaurent::monomial(p, 0, 0, d);
        if (i + 1 == length) break;
        u64 t = d ? teichmuller_lift(d, p, length).mantissa() : 0;
        r = R.sub(r, t) / p;
    }
    return w;
}

WittVector witt_mul_p(const WittVector& x) { return verschiebung(witt_frobenius(x)); }

WittVector witt_invert(const WittVector& x, i64 cap) {
    if (x.comps[0].is_zero()) throw PreconditionError("Witt vector with zero first component is not a unit");
    WittVector X = x;
    X.denom_exp = 0;
    WittVector y0 = teichmuller(perf_invert(X.comps[0], cap), x.length);
    WittVector one = witt_one(x.p, x.length);
    WittVector me = witt_neg(witt_sub(witt_mul(X, y0), one));
    WittVector acc = one, s = one;
    for (int k = 1; k < x.length; ++k) {
        s = witt_mul(s, me);
        acc = witt_add(acc, s);
    }
    return times_p(witt_mul(y0, acc), x.denom_exp);
}

WittVector witt_pow(const WittVector& x, i64 e, i64 cap) {
    WittVector base = e < 0 ? witt_invert(x, cap) : x;
    u64 k = static_cast<u64>(e < 0 ? -e : e);
    WittVector r = witt_one(x.p, x.length);
    while (k) {
        if (k & 1) r = witt_mul(r, base);
        k >>= 1;
        if (k) base = witt_mul(base, base);
    }
    return r;
}

WittVector witt_gamma(const WittVector& x, i64 c, i64 cap) {
    WittVector w = x;
    for (auto& comp : w.comps) comp = perf_gamma(comp, c, cap);
    return w;
}

bool witt_equal(const WittVector& x, const WittVector& y) {
    check_shape(x, y);
    const int D = std::max(x.denom_exp, y.denom_exp);
    WittVector X = times_p(x, D - x.denom_exp), Y = times_p(y, D - y.denom_exp);
    for (int n = 0; n < x.length; ++n)
        if (!perf_equal(X.comps[static_cast<std::size_t>(n)], Y.comps[static_cast<std::size_t>(n)])) return false;
    return true;
}

double NormValue::value() const {
    return zero ? 0.0 : std::pow(static_cast<double>(p), -exponent.value());
}

NormValue witt_gauss_norm(const WittVector& x, const Rational& r) {
    if (r.num <= 0) throw PreconditionError("r must be positive");
    NormValue out;
    out.p = x.p;
    out.zero = true;
    for (int n = 0; n < x.length; ++n) {
        const PerfLaurent& a = x.comps[static_cast<std::size_t>(n)];
        if (a.is_zero()) continue;
        Rational e = Rational(n) + r * tilt_valuation(a) * Rational(1, static_cast<i64>(ipow(x.p, n)));
        if (out.zero || e < out.exponent) out.exponent = e;
        out.zero = false;
    }
    if (!out.zero) out.exponent = out.exponent - Rational(x.denom_exp);
    return out;
}

NormValue expansion_norm(const TeichExpansion& x, const Rational& r) {
    NormValue out;
    out.p = x.p;
    out.zero = true;
    for (auto& [k, y] : x.terms) {
        if (y.is_zero()) continue;
        Rational e = Rational(k) + r * tilt_valuation(y);
        if (out.zero || e < out.exponent) out.exponent = e;
        out.zero = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cyclotomic level rings.

namespace {

void align_cyclo(CycloLevel& a, CycloLevel& b) {
    if (a.p != b.p || a.N != b.N) throw PreconditionError("cyclotomic rings differ");
    if (a.M < b.M) a = a.raise(b.M);
    if (b.M < a.M) b = b.raise(a.M);
}

CycloLevel shift_denom(const CycloLevel& a, int e) {
    if (e == a.denom_exp) return a;
    CycloLevel out = a;
    Zq R(a.p, a.N);
    u64 f = R.ppow(e - a.denom_exp);
    for (auto& x : out.c) x = R.mul(x, f);
    out.denom_exp = e;
    return out;
}

}  // namespace

CycloLevel CycloLevel::zero(u64 p, int N, int M) {
    CycloLevel z;
    z.p = p;
    z.N = N;
    z.M = M;
    z.c.assign(static_cast<std::size_t>(ipow(p, M)), 0);
    return z;
}

CycloLevel CycloLevel::constant(u64 p, int N, int M, i64 a) {
    CycloLevel z = zero(p, N, M);
    z.c[0] = Zq(p, N).from(a);
    return z;
}

CycloLevel CycloLevel::root_of_unity(u64 p, int N, int M, int j) {
    if (j < 0 || j > M) throw PreconditionError("root of unity level outside the ring");
    CycloLevel z = zero(p, N, M);
    z.c[static_cast<std::size_t>(ipow(p, M - j) % ipow(p, M))] = 1;
    return z;
}

int CycloLevel::degree() const { return static_cast<int>(ipow(p, M - 1) * (p - 1)); }

std::vector<u64> CycloLevel::reduced() const {
    Zq R(p, N);
    std::vector<u64> a = c;
    const std::size_t d = static_cast<std::size_t>(degree());
    const std::size_t blk = static_cast<std::size_t>(ipow(p, M - 1));
    for (std::size_t i = a.size(); i-- > d;) {
        u64 x = a[i];
        if (!x) continue;
        a[i] = 0;
        for (std::size_t k = 0; k + 1 < p; ++k) {
            u64& t = a[i - d + k * blk];
            t = R.sub(t, x);
        }
    }
    a.resize(d);
    return a;
}

int CycloLevel::valuation() const {
    Zq R(p, N);
    int v = N;
    for (u64 x : reduced())
        if (x) v = std::min(v, R.val(x));
    return v - denom_exp;
}

CycloLevel CycloLevel::raise(int M2) const {
    if (M2 < M) throw std::logic_error("cannot lower a cyclotomic level");
    CycloLevel out = zero(p, N, M2);
    out.denom_exp = denom_exp;
    const std::size_t f = static_cast<std::size_t>(ipow(p, M2 - M));
    for (std::size_t i = 0; i < c.size(); ++i) out.c[i * f] = c[i];
    return out;
}

nlohmann::json CycloLevel::to_json() const {
    return {{"p", p}, {"N", N}, {"M", M}, {"denom_exp", denom_exp}, {"coeffs", reduced()}};
}

CycloLevel cyclo_add(const CycloLevel& a0, const CycloLevel& b0) {
    CycloLevel a = a0, b = b0;
    align_cyclo(a, b);
    int e = std::max(a.denom_exp, b.denom_exp);
    a = shift_denom(a, e);
    b = shift_denom(b, e);
    Zq R(a.p, a.N);
    for (std::size_t i = 0; i < a.c.size(); ++i) a.c[i] = R.add(a.c[i], b.c[i]);
    return a;
}

CycloLevel cyclo_sub(const CycloLevel& a, const CycloLevel& b) {
    CycloLevel nb = b;
    Zq R(b.p, b.N);
    for (auto& x : nb.c) x = R.neg(x);
    return cyclo_add(a, nb);
}

CycloLevel cyclo_mul(const CycloLevel& a0, const CycloLevel& b0) {
    CycloLevel a = a0, b = b0;
    align_cyclo(a, b);
    Zq R(a.p, a.N);
    const std::size_t n = a.c.size();
    std::vector<u128> acc(n, 0);
    std::vector<std::size_t> nzb;
    for (std::size_t j = 0; j < n; ++j)
        if (b.c[j]) nzb.push_back(j);
    for (std::size_t i = 0; i < n; ++i) {
        if (!a.c[i]) continue;
        for (std::size_t j : nzb) {
            std::size_t k = i + j;
            if (k >= n) k -= n;
            acc[k] += static_cast<u128>(a.c[i]) * b.c[j];
        }
    }
    CycloLevel out = CycloLevel::zero(a.p, a.N, a.M);
    out.denom_exp = a.denom_exp + b.denom_exp;
    for (std::size_t k = 0; k < n; ++k) out.c[k] = static_cast<u64>(acc[k] % R.q);
    return out;
}

CycloLevel cyclo_pow(const CycloLevel& a, u64 e) {
    CycloLevel r = CycloLevel::constant(a.p, a.N, a.M, 1);
    CycloLevel base = a;
    while (e) {
        if (e & 1) r = cyclo_mul(r, base);
        e >>= 1;
        if (e) base = cyclo_mul(base, base);
    }
    return r;
}

// ---------------------------------------------------------------------------
// theta.

namespace {

int sharp_guard(const ThetaParams& P, int n) { return std::max(0, P.N - P.G - n - 1) + P.guard; }

}  // namespace

int theta_level(const WittVector& w, const ThetaParams& P) {
    int M = P.m;
    for (int n = 0; n < w.length; ++n) {
        const PerfLaurent& a = w.comps[static_cast<std::size_t>(n)];
        if (a.is_zero()) continue;
        M = std::max(M, P.m + a.level + n + sharp_guard(P, n));
    }
    return std::max(M, 1);
}

CycloLevel theta_map(const WittVector& w, const ThetaParams& P) {
    if (P.m < 1) throw PreconditionError("theta needs level m >= 1");
    if (P.N - P.G < 1) throw PreconditionError("theta needs N > G");
    const u64 p = w.p;
    const int need = theta_level(w, P);
    const int M = P.M ? P.M : need;
    if (M < need) throw PreconditionError("insufficient level reserve for the sharp construction");
    Zq R(p, P.N);
    CycloLevel sum = CycloLevel::zero(p, P.N, M);
    for (int n = 0; n < w.length; ++n) {
        const PerfLaurent& a = w.comps[static_cast<std::size_t>(n)];
        if (!a.exact()) throw PreconditionError("theta needs exactly known components");
        if (a.is_zero()) continue;
        if (a.terms.begin()->first < 0) throw PreconditionError("theta is defined on integral vectors only");
        const int s = sharp_guard(P, n);
        const int L = a.level + n + s;
        // tbar^{k / p^L} -> (zeta_{m+L} - 1)^k, zeta_{m+L} = X^{p^{M-m-L}}.
        const std::size_t size = static_cast<std::size_t>(ipow(p, M));
        const std::size_t shift = static_cast<std::size_t>(ipow(p, M - P.m - L));
        CycloLevel acc = CycloLevel::zero(p, P.N, M);
        std::vector<u64> tmp(size);
        for (i64 k = a.terms.rbegin()->first; k >= 0; --k) {
            for (std::size_t i = 0; i < size; ++i) {
                std::size_t j = i >= shift ? i - shift : i + size - shift;
                tmp[i] = R.sub(acc.c[j], acc.c[i]);
            }
            acc.c.swap(tmp);
            auto it = a.terms.find(k);
            if (it != a.terms.end()) acc.c[0] = R.add(acc.c[0], it->second);
        }
        CycloLevel term = cyclo_pow(acc, ipow(p, s));
        const u64 pn = R.ppow(n);
        for (auto& x : term.c) x = R.mul(x, pn);
        sum = cyclo_add(sum, term);
    }
    sum.denom_exp = w.denom_exp;
    return sum;
}

WittVector xi_element(u64 p, int length, int k) {
    PerfLaurent one = PerfLaurent::monomial(p, 0, 0, 1);
    PerfLaurent base = k >= 0 ? perf_add(one, PerfLaurent::monomial(p, static_cast<i64>(ipow(p, k)), 0, 1))
                              : perf_add(one, PerfLaurent::monomial(p, 1, -k, 1));
    WittVector sum = witt_zero(p, length);
    for (u64 i = 0; i < p; ++i) sum = witt_add(sum, teichmuller(perf_pow(base, static_cast<i64>(i), 0), length));
    return sum;
}

// ---------------------------------------------------------------------------
// phi-eigen element.

nlohmann::json PhiEigenResult::to_json() const {
    auto ts = nlohmann::json::array();
    for (auto& [k, y] : element.terms) ts.push_back({{"p_power", k}, {"teichmuller", y.to_json()}});
    return {{"terms", ts},
            {"defect_exponent", defect_exponent.str()},
            {"bound_exponent", bound_exponent.str()},
            {"below_bound", below_bound}};
}

PhiEigenResult phi_eigen_element(const PerfLaurent& xbar, int T, const Rational& r) {
    if (xbar.is_zero()) throw PreconditionError("phi-eigen element needs a nonzero input");
    if (!(Rational(0) < tilt_valuation(xbar))) throw PreconditionError("phi-eigen element needs v(x) > 0");
    if (T < 0) throw PreconditionError("T must be nonnegative");
    PhiEigenResult out;
    out.element.p = xbar.p;
    for (int n = -T; n <= T; ++n) {
        PerfLaurent y = xbar;
        for (int i = 0; i < std::abs(n); ++i) y = n > 0 ? perf_frobenius(y) : perf_root(y);
        out.element.terms.emplace_back(-n, y);
    }
    // phi(x) and p x as Teichmuller expansions; matching terms cancel exactly.
    std::vector<std::pair<int, PerfLaurent>> a, b;
    for (auto& [k, y] : out.element.terms) {
        a.emplace_back(k, perf_frobenius(y));
        b.emplace_back(k + 1, y);
    }
    TeichExpansion left;
    left.p = xbar.p;
    std::vector<bool> used(b.size(), false);
    for (auto& [k, y] : a) {
        bool hit = false;
        for (std::size_t j = 0; j < b.size() && !hit; ++j)
            if (!used[j] && b[j].first == k && perf_equal(b[j].second, y) && b[j].second.exact() && y.exact()) {
                used[j] = true;
                hit = true;
            }
        if (!hit) left.terms.emplace_back(k, y);
    }
    for (std::size_t j = 0; j < b.size(); ++j)
        if (!used[j]) left.terms.push_back(b[j]);
    NormValue d = expansion_norm(left, r);
    out.defect_exponent = d.zero ? Rational(i64(1) << 40) : d.exponent;
    out.bound_exponent = Rational(T);
    out.below_bound = out.bound_exponent < out.defect_exponent;
    return out;
}

// ---------------------------------------------------------------------------
// pi -> [epsilon] - 1.

namespace {

PerfLaurent unknown_from(u64 p, const Rational& e) {
    int lv = 0;
    while (static_cast<i64>(ipow(p, lv)) % e.den != 0) ++lv;
    PerfLaurent u(p);
    u.level = lv;
    u.hi = e.num * (static_cast<i64>(ipow(p, lv)) / e.den);
    return u;
}

}  // namespace

WittVector embed_pi(const TruncatedLaurent& f, int length, i64 cap) {
    check_length(length);
    const u64 p = f.p();
    PerfLaurent one = PerfLaurent::monomial(p, 0, 0, 1);
    WittVector E = witt_sub(teichmuller(perf_add(one, PerfLaurent::monomial(p, 1, 0, 1)), length), witt_one(p, length));
    const int Ef = f.max_denom_exp();
    Zq R(p, length);
    WittVector sum = witt_zero(p, length);
    int lo = 0, top = -1;
    std::map<int, i64> cs;
    for (auto& [k, a] : f.coeffs()) {
        if (a.is_zero()) continue;
        Zq RN(p, f.N());
        u64 m = RN.mul(a.mantissa(), RN.ppow(Ef - a.denom_exp())) % R.q;
        if (!m) continue;
        cs[k] = static_cast<i64>(m);
        lo = std::min(lo, k);
        top = std::max(top, k);
    }
    if (top >= 0) {
        WittVector pw = witt_one(p, length);
        for (int k = 0; k <= top; ++k) {
            if (k) pw = witt_mul(pw, E);
            auto it = cs.find(k);
            if (it != cs.end()) sum = witt_add(sum, witt_mul(witt_scalar(p, length, it->second), pw));
        }
    }
    if (lo < 0) {
        WittVector Y = witt_invert(E, cap);
        WittVector pw = witt_one(p, length);
        for (int k = -1; k >= lo; --k) {
            pw = witt_mul(pw, Y);
            auto it = cs.find(k);
            if (it != cs.end()) sum = witt_add(sum, witt_mul(witt_scalar(p, length, it->second), pw));
        }
    }
    if (f.tail()) {
        // O(pi^H) maps into ([eps] - 1)^H times an integral vector.
        const i64 H = f.hi() + 1;
        WittVector U = witt_zero(p, length);
        for (int n = 0; n < length; ++n) {
            bool any = false;
            Rational mn;
            for (int i = 0; i <= n; ++i) {
                const PerfLaurent& e = E.comps[static_cast<std::size_t>(i)];
                if (e.is_zero()) continue;
                Rational v = e.lowest() * Rational(static_cast<i64>(ipow(p, n - i)));
                if (!any || v < mn) mn = v;
                any = true;
            }
            if (any) U.comps[static_cast<std::size_t>(n)] = unknown_from(p, Rational(H) * mn);
        }
        sum = witt_add(sum, U);
    }
    // Coefficients are known modulo p^{N - Ef}; deeper components are unknown.
    for (int n = std::max(0, f.N() - Ef); n < length; ++n) {
        PerfLaurent u(p);
        u.hi = -(i64(1) << 40);
        sum.comps[static_cast<std::size_t>(n)] = u;
    }
    sum.denom_exp = Ef;
    return sum;
}

}  // namespace phigamma
