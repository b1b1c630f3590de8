#include "phigamma/laurent.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace phigamma {

namespace {

void check_same(const TruncatedLaurent& f, const TruncatedLaurent& g) {
    if (f.p() != g.p() || f.N() != g.N()) throw PreconditionError("mismatched p or N");
}

TruncatedLaurent from_scaled(u64 p, int N, const ZL& F, int E, int lo, int hi, bool tail) {
    if (E >= N) throw PreconditionError("precision exhausted");
    TruncatedLaurent r(p, N, lo, hi, tail);
    for (std::size_t i = 0; i < F.c.size(); ++i) {
        int k = F.lo + static_cast<int>(i);
        if (!F.c[i] || k < lo || k > hi) continue;
        r.set(k, PAdic(p, N, F.c[i], E));
    }
    return r;
}

}  // namespace

TruncatedLaurent::TruncatedLaurent(u64 p, int N, int lo, int hi, bool tail)
    : p_(p), N_(N), lo_(lo), hi_(hi), tail_(tail) {
    if (p < 3 || !is_prime(p)) throw PreconditionError("p must be an odd prime");
    if (hi < lo) throw PreconditionError("empty window");
}

TruncatedLaurent TruncatedLaurent::monomial(u64 p, int N, int k, const PAdic& a) {
    TruncatedLaurent r(p, N, k, k, false);
    r.set(k, a);
    return r;
}

TruncatedLaurent TruncatedLaurent::monomial(u64 p, int N, int k, i64 a) {
    return monomial(p, N, k, PAdic::from_int(a, p, N));
}

TruncatedLaurent TruncatedLaurent::from_ints(u64 p, int N, int lo, const std::vector<i64>& a) {
    TruncatedLaurent r(p, N, lo, lo + std::max<int>(0, static_cast<int>(a.size()) - 1), false);
    for (std::size_t i = 0; i < a.size(); ++i) r.set(lo + static_cast<int>(i), PAdic::from_int(a[i], p, N));
    return r;
}

TruncatedLaurent TruncatedLaurent::from_zl(u64 p, int N, const ZL& f, int lo, int hi, bool tail) {
    return from_scaled(p, N, f, 0, lo, hi, tail);
}

PAdic TruncatedLaurent::coeff(int k) const {
    auto it = c_.find(k);
    if (it != c_.end()) return it->second;
    if (tail_ && k > hi_) return PAdic::exhausted_zero(p_, N_);
    return PAdic::zero(p_, N_);
}

void TruncatedLaurent::set(int k, const PAdic& a) {
    if (k < lo_ || k > hi_) throw PreconditionError("exponent outside window");
    if (a.is_zero() && !a.exhausted())
        c_.erase(k);
    else
        c_[k] = a;
}

bool TruncatedLaurent::is_zero() const {
    for (auto& [k, a] : c_)
        if (!a.is_zero()) return false;
    return true;
}

int TruncatedLaurent::order() const {
    for (auto& [k, a] : c_)
        if (!a.is_zero()) return k;
    return INT_MAX;
}

int TruncatedLaurent::max_denom_exp() const {
    int E = 0;
    for (auto& [k, a] : c_) E = std::max(E, a.denom_exp());
    return E;
}

ZL TruncatedLaurent::scaled(int& E) const {
    E = max_denom_exp();
    Zq R(p_, N_);
    ZL F;
    if (c_.empty()) return F;
    F.lo = c_.begin()->first;
    F.c.assign(static_cast<std::size_t>(c_.rbegin()->first - F.lo + 1), 0);
    for (auto& [k, a] : c_) {
        if (a.exhausted()) continue;
        F.c[static_cast<std::size_t>(k - F.lo)] = R.mul(a.mantissa(), R.ppow(E - a.denom_exp()));
    }
    F.trim();
    return F;
}

bool TruncatedLaurent::equals(const TruncatedLaurent& o) const {
    check_same(*this, o);
    int top = INT_MAX;
    if (tail_) top = std::min(top, hi_);
    if (o.tail_) top = std::min(top, o.hi_);
    std::vector<int> ks;
    for (auto& [k, a] : c_) ks.push_back(k);
    for (auto& [k, a] : o.c_) ks.push_back(k);
    for (int k : ks) {
        if (k > top) continue;
        if (!(coeff(k) == o.coeff(k))) return false;
    }
    return true;
}

TruncatedLaurent TruncatedLaurent::truncate(int h) const {
    TruncatedLaurent r(p_, N_, lo_, std::max(lo_, std::min(h, hi_)), tail_);
    bool cut = false;
    for (auto& [k, a] : c_) {
        if (k > h) {
            cut = cut || !a.is_zero();
            continue;
        }
        r.c_[k] = a;
    }
    if (h < hi_) r.tail_ = tail_ || cut || h < hi_;
    return r;
}

std::string TruncatedLaurent::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [k, a] : c_) {
        if (a.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << a.str() << ")*pi^" << k;
    }
    if (first) os << "0";
    if (tail_) os << " + O(pi^" << hi_ + 1 << ")";
    return os.str();
}

GammaElement GammaElement::make(u64 p, int N, u64 a, i64 s) {
    auto ring = series_ring(p, N);
    const Zq& RM = ring->RM();
    GammaElement g;
    g.p = p;
    g.N = N;
    g.a = a % p;
    g.s = s;
    if (g.a == 0) throw PreconditionError("Gamma element needs a unit residue");
    u64 w = g.a;
    for (int i = 0; i < RM.N + 1; ++i) w = RM.pow(w, p);
    u64 base = (1 + p) % RM.q;
    u64 pw = s >= 0 ? RM.pow(base, static_cast<u64>(s)) : RM.pow(RM.inv(base), static_cast<u64>(-s));
    g.c = RM.mul(w, pw);
    return g;
}

GammaElement GammaElement::operator*(const GammaElement& o) const {
    if (p != o.p) throw PreconditionError("mismatched primes");
    auto ring = series_ring(p, std::min(N, o.N));
    GammaElement g = make(p, std::min(N, o.N), (a * o.a) % p, s + o.s);
    (void)ring;
    return g;
}

GammaElement GammaElement::inverse() const {
    u64 ai = 1;
    for (u64 x = 1; x < p; ++x)
        if ((x * a) % p == 1) ai = x;
    return make(p, N, ai, -s);
}

PAdic GammaElement::value() const { return PAdic(p, N, c % ipow(p, N), 0); }

TruncatedLaurent series_add(const TruncatedLaurent& f, const TruncatedLaurent& g) {
    check_same(f, g);
    bool tail = f.tail() || g.tail();
    int hi = INT_MAX;
    if (f.tail()) hi = std::min(hi, f.hi());
    if (g.tail()) hi = std::min(hi, g.hi());
    if (!tail) hi = std::max(f.hi(), g.hi());
    int lo = std::min(f.lo(), g.lo());
    hi = std::max(hi, lo);
    TruncatedLaurent r(f.p(), f.N(), lo, hi, tail);
    for (auto& [k, a] : f.coeffs())
        if (k <= hi) r.set(k, r.coeff(k) + a);
    for (auto& [k, a] : g.coeffs())
        if (k <= hi) r.set(k, r.coeff(k) + a);
    return r;
}

TruncatedLaurent series_scale(const TruncatedLaurent& f, const PAdic& a) {
    TruncatedLaurent r(f.p(), f.N(), f.lo(), f.hi(), f.tail());
    for (auto& [k, c] : f.coeffs()) r.set(k, c * a);
    return r;
}

TruncatedLaurent series_sub(const TruncatedLaurent& f, const TruncatedLaurent& g) {
    return series_add(f, series_scale(g, PAdic::from_int(-1, g.p(), g.N())));
}

TruncatedLaurent series_mul(const TruncatedLaurent& f, const TruncatedLaurent& g, int cap) {
    check_same(f, g);
    auto ring = series_ring(f.p(), f.N());
    int Ef, Eg;
    ZL F = f.scaled(Ef), G = g.scaled(Eg);
    int lo = f.lo() + g.lo();
    int hi = INT_MAX;
    if (f.tail()) hi = std::min(hi, f.hi() + g.lo());
    if (g.tail()) hi = std::min(hi, g.hi() + f.lo());
    bool tail = f.tail() || g.tail();
    if (!tail) hi = f.hi() + g.hi();
    if (hi > cap) {
        hi = cap;
        tail = true;
    }
    hi = std::max(hi, lo);
    ZL P = ring->mul(F, G, hi + 1);
    return from_scaled(f.p(), f.N(), P, Ef + Eg, lo, hi, tail);
}

TruncatedLaurent series_invert(const TruncatedLaurent& f, int hi_out) {
    const u64 p = f.p();
    const int N = f.N();
    int m = f.order();
    if (m == INT_MAX) throw PreconditionError("no leading term resolvable at precision");
    PAdic a = f.coeff(m);
    PAdic ai = a.inverse();
    int n_terms = hi_out + m + 1;
    if (f.tail()) n_terms = std::min(n_terms, f.hi() - m + 1);
    if (n_terms <= 0) throw PreconditionError("window too small to invert");
    std::vector<PAdic> w(static_cast<std::size_t>(n_terms), PAdic::zero(p, N));
    for (int k = 1; k < n_terms; ++k) w[static_cast<std::size_t>(k)] = f.coeff(m + k) * ai;
    std::vector<PAdic> b(static_cast<std::size_t>(n_terms), PAdic::zero(p, N));
    b[0] = PAdic::one(p, N);
    int last = 0;
    for (int n = 1; n < n_terms; ++n) {
        PAdic s = PAdic::zero(p, N);
        for (int k = 1; k <= n; ++k)
            if (!w[static_cast<std::size_t>(k)].is_zero() || w[static_cast<std::size_t>(k)].exhausted())
                s += w[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(n - k)];
        b[static_cast<std::size_t>(n)] = -s;
        if (b[static_cast<std::size_t>(n)].exhausted()) break;
        last = n;
    }
    bool exact = !f.tail() && f.coeffs().size() == 1;
    int top = exact ? -m : -m + last;
    TruncatedLaurent r(p, N, -m, top, !exact);
    for (int n = 0; n <= last && -m + n <= top; ++n) r.set(-m + n, b[static_cast<std::size_t>(n)] * ai);
    return r;
}

TruncatedLaurent series_invert(const TruncatedLaurent& f) {
    int m = f.order();
    if (m == INT_MAX) throw PreconditionError("no leading term resolvable at precision");
    int hi_out = f.tail() ? f.hi() - 2 * m : -m + std::max(16, f.hi() - m);
    return series_invert(f, hi_out);
}

TruncatedLaurent frobenius_series(const TruncatedLaurent& f, int cap) {
    auto ring = series_ring(f.p(), f.N());
    int E;
    ZL F = f.scaled(E);
    ZL P = ring->phi(F);
    const int p = static_cast<int>(f.p());
    int lo = std::min(p * f.lo(), P.empty() ? p * f.lo() : P.lo);
    int hi = f.tail() ? f.hi() : p * f.hi();
    bool tail = f.tail();
    if (hi > cap) {
        hi = cap;
        tail = true;
    }
    if (-lo > kWindowCap) throw PreconditionError("window overflow beyond cap");
    return from_scaled(f.p(), f.N(), P, E, lo, std::max(lo, hi), tail);
}

TruncatedLaurent gamma_series(const TruncatedLaurent& f, const GammaElement& c) {
    if (c.p != f.p()) throw PreconditionError("mismatched primes");
    auto ring = series_ring(f.p(), f.N());
    int E;
    ZL F = f.scaled(E);
    const int top = f.hi() + 1;
    auto tab = ring->gamma_table(c.c, std::min(f.lo(), 0), top);
    const int kmin = std::min(f.lo(), 0);
    ZL out;
    for (std::size_t i = 0; i < F.c.size(); ++i) {
        if (!F.c[i]) continue;
        int k = F.lo + static_cast<int>(i);
        if (k >= top) continue;
        out = ring->add(out, ring->scale(tab[static_cast<std::size_t>(k - kmin)], F.c[i]));
    }
    bool identity = (c.c % ring->RM().q) == 1;
    return from_scaled(f.p(), f.N(), out, E, f.lo(), f.hi(), f.tail() || !identity);
}

TruncatedLaurent log_one_plus_pi(u64 p, int N, int hi) {
    if (hi < 1) throw PreconditionError("window must lie in [1, hi]");
    TruncatedLaurent t(p, N, 1, hi, true);
    for (int n = 1; n <= hi; ++n) {
        if (vp(n, p) >= N) throw PreconditionError("denominator exceeds guard digits");
        t.set(n, padic_from_rational((n % 2) ? 1 : -1, n, p, N));
    }
    return t;
}

int psi_valuation_bound(SeriesRing& ring, int H) {
    int best = INT_MAX;
    for (u64 i = 0; i < ring.p(); ++i) {
        ZL ui;
        ui.lo = H;
        for (u64 j = 0; j <= i; ++j) ui.c.push_back(ring.binom(static_cast<int>(i), static_cast<int>(j)));
        ZL r = ring.psi(ui);
        best = std::min(best, r.valuation());
    }
    return best;
}

int psi_pole_bound(SeriesRing& ring, int L) {
    int worst = 0;
    for (u64 i = 0; i < ring.p(); ++i) {
        ZL ui;
        ui.lo = -L;
        for (u64 j = 0; j <= i; ++j) ui.c.push_back(ring.binom(static_cast<int>(i), static_cast<int>(j)));
        ZL r = ring.psi(ui);
        int v = r.valuation();
        if (v != INT_MAX) worst = std::max(worst, -v);
    }
    return worst;
}

TruncatedLaurent psi_series(const TruncatedLaurent& f) {
    auto ring = series_ring(f.p(), f.N());
    int E;
    ZL F = f.scaled(E);
    ZL P = ring->psi(F);
    int lo = std::min(f.lo(), 0);
    if (!P.empty()) lo = std::min(lo, P.lo);
    int hi;
    if (f.tail()) {
        hi = psi_valuation_bound(*ring, f.hi() + 1) - 1;
    } else {
        hi = std::max(0, f.hi()) / static_cast<int>(f.p());
        if (!P.empty()) hi = std::max(hi, P.hi());
    }
    if (hi < lo) throw PreconditionError("precision exhausted: window too small for psi");
    return from_scaled(f.p(), f.N(), P, E, lo, hi, f.tail());
}

TruncatedLaurent trace_phi(const TruncatedLaurent& f) {
    return series_scale(frobenius_series(psi_series(f)), PAdic::from_int(static_cast<i64>(f.p()), f.p(), f.N()));
}

PAdic residue(const TruncatedLaurent& f) {
    if (f.lo() > -1 || f.hi() < -1) throw PreconditionError("-1 outside window");
    return f.coeff(-1);
}

PAdic iwasawa_pairing(const TruncatedLaurent& f, const TruncatedLaurent& g) {
    TruncatedLaurent h = series_mul(f, g);
    if (h.lo() > -1) return PAdic::zero(f.p(), f.N());
    if (h.tail() && h.hi() < -1) throw PreconditionError("product window does not reach pi^-1");
    PAdic s = PAdic::zero(f.p(), f.N());
    for (auto& [k, a] : h.coeffs()) {
        if (k > -1) break;
        s += ((-1 - k) % 2 == 0) ? a : -a;
    }
    return s;
}

nlohmann::json to_json(const TruncatedLaurent& f) {
    nlohmann::json j;
    j["p"] = f.p();
    j["N"] = f.N();
    j["lo"] = f.lo();
    j["hi"] = f.hi();
    j["tail_flag"] = f.tail();
    auto arr = nlohmann::json::array();
    for (auto& [k, a] : f.coeffs()) {
        if (a.is_zero()) continue;
        arr.push_back({k, a.mantissa(), a.denom_exp()});
    }
    j["coeffs"] = arr;
    return j;
}

TruncatedLaurent laurent_from_json(const nlohmann::json& j) {
    u64 p = j.at("p").get<u64>();
    int N = j.at("N").get<int>();
    TruncatedLaurent f(p, N, j.at("lo").get<int>(), j.at("hi").get<int>(), j.value("tail_flag", false));
    for (auto& c : j.at("coeffs")) f.set(c.at(0).get<int>(), PAdic(p, N, c.at(1).get<u64>(), c.at(2).get<int>()));
    return f;
}

}  // namespace phigamma
