#include "phigamma/padic.hpp"

#include <algorithm>
#include <sstream>

namespace phigamma {

namespace {

void same_prime(const PAdic& a, const PAdic& b) {
    if (a.p() != b.p()) throw PreconditionError("mismatched primes");
}

}  // namespace

PAdic::PAdic(u64 p, int N, u64 mantissa, int denom_exp) : p_(p), N_(N), e_(denom_exp) {
    if (p < 3 || !is_prime(p)) throw PreconditionError("p must be an odd prime");
    u64 q = ipow(p, N);
    m_ = mantissa % q;
    if (e_ < 0) throw PreconditionError("negative denominator exponent");
    if (e_ >= N_) {
        m_ = 0;
        e_ = N_;
        exh_ = true;
    }
}

PAdic PAdic::from_int(i64 x, u64 p, int N) {
    Zq R(p, N);
    return PAdic(p, N, R.from(x), 0);
}

PAdic PAdic::exhausted_zero(u64 p, int N) { return PAdic(p, N, 0, N); }

bool PAdic::is_integral() const {
    if (is_zero()) return true;
    Zq R(p_, N_);
    return R.val(m_) >= e_;
}

bool PAdic::is_unit() const {
    if (is_zero()) return false;
    Zq R(p_, N_);
    return R.val(m_) == e_;
}

PAdic PAdic::operator+(const PAdic& o) const {
    same_prime(*this, o);
    int N = std::min(N_, o.N_);
    if (exh_ || o.exh_) return exhausted_zero(p_, N);
    Zq R(p_, N);
    int e = std::max(e_, o.e_);
    u64 a = R.mul(m_ % R.q, R.ppow(e - e_));
    u64 b = R.mul(o.m_ % R.q, R.ppow(e - o.e_));
    // Precision is N - e measured against the smaller modulus.
    return PAdic(p_, N, R.add(a, b), e + 0);
}

PAdic PAdic::operator-() const {
    if (exh_) return *this;
    Zq R(p_, N_);
    return PAdic(p_, N_, R.neg(m_), e_);
}

PAdic PAdic::operator-(const PAdic& o) const { return *this + (-o); }

PAdic PAdic::operator*(const PAdic& o) const {
    same_prime(*this, o);
    int N = std::min(N_, o.N_);
    if (exh_ || o.exh_) return exhausted_zero(p_, N);
    Zq R(p_, N);
    return PAdic(p_, N, R.mul(m_ % R.q, o.m_ % R.q), e_ + o.e_);
}

PAdic PAdic::inverse() const {
    if (is_zero()) throw PreconditionError("inverse of a value indistinguishable from zero");
    Zq R(p_, N_);
    int a = R.val(m_);
    u64 u = m_;
    for (int i = 0; i < a; ++i) u /= p_;
    Zq Ru(p_, N_ - a);
    u64 ui = Ru.inv(u % Ru.q);
    int e2 = std::max(0, 2 * a - e_);
    int sh = e_ - a + e2;
    return PAdic(p_, N_, R.mul(ui, R.ppow(sh)), e2);
}

PAdic PAdic::shift(int k) const {
    if (exh_) return *this;
    Zq R(p_, N_);
    if (k >= 0) {
        int drop = std::min(k, e_);
        return PAdic(p_, N_, R.mul(m_, R.ppow(k - drop)), e_ - drop);
    }
    return PAdic(p_, N_, m_, e_ - k);
}

u64 PAdic::integral_residue() const {
    if (is_zero()) return 0;
    if (!is_integral()) throw PreconditionError("value is not integral");
    u64 m = m_;
    for (int i = 0; i < e_; ++i) m /= p_;
    return m;
}

std::string PAdic::str() const {
    std::ostringstream os;
    if (exh_) return "O(1)";
    os << m_;
    if (e_) os << "/" << p_ << "^" << e_;
    os << " +O(" << p_ << "^" << (N_ - e_) << ")";
    return os.str();
}

PAdic padic_from_rational(i64 num, i64 den, u64 p, int N) {
    if (den == 0) throw PreconditionError("zero denominator");
    if (num == 0) return PAdic::zero(p, N);
    int vn = vp(num, p), vd = vp(den, p);
    int m = std::min(vn, vd);
    for (int i = 0; i < m; ++i) {
        num /= static_cast<i64>(p);
        den /= static_cast<i64>(p);
    }
    int e = vd - m;
    for (int i = 0; i < e; ++i) den /= static_cast<i64>(p);
    if (e >= N) throw PreconditionError("denominator exponent exceeds precision");
    Zq R(p, N);
    return PAdic(p, N, R.mul(R.from(num), R.inv(R.from(den))), e);
}

Valuation valuation(const PAdic& x) {
    if (x.is_zero()) return {true, 0};
    Zq R(x.p(), x.N());
    return {false, R.val(x.mantissa()) - x.denom_exp()};
}

PAdic teichmuller_lift(u64 a, u64 p, int N) {
    if (a % p == 0) throw PreconditionError("Teichmuller lift of zero residue");
    Zq R(p, N);
    u64 x = a % p;
    for (int i = 0; i < N + 1; ++i) x = R.pow(x, p);
    return PAdic(p, N, x, 0);
}

PAdic binomial_padic(const PAdic& c, int n, bool exact_representative) {
    u64 p = c.p();
    int N = c.N();
    if (n < 0) throw PreconditionError("negative binomial index");
    if (n == 0) return PAdic::one(p, N);
    if (c.exhausted()) return PAdic::exhausted_zero(p, N);
    if (!c.is_integral()) {
        // General case: multiply out with the denominator bookkeeping of PAdic.
        PAdic acc = PAdic::one(p, N);
        for (int i = 0; i < n; ++i) acc *= c - PAdic::from_int(i, p, N);
        for (int i = 1; i <= n; ++i) acc *= padic_from_rational(1, i, p, N);
        return acc;
    }
    Zq R(p, N);
    i64 rep = static_cast<i64>(c.integral_residue());
    int A = 0, worst = 0;
    u64 unit = 1;
    for (int i = 0; i < n; ++i) {
        i64 f = rep - i;
        if (f == 0) return PAdic::zero(p, N);
        int a = vp(f, p);
        for (int k = 0; k < a; ++k) f /= static_cast<i64>(p);
        A += a;
        worst = std::max(worst, a);
        unit = R.mul(unit, R.from(f));
    }
    for (i64 i = 1; i <= n; ++i) {
        i64 f = i;
        int a = vp(f, p);
        for (int k = 0; k < a; ++k) f /= static_cast<i64>(p);
        A -= a;
        unit = R.mul(unit, R.inv(R.from(f)));
    }
    int lost = exact_representative ? 0 : worst + c.denom_exp();
    int e = std::max(0, lost - A);
    if (e >= N) return PAdic::exhausted_zero(p, N);
    return PAdic(p, N, R.mul(unit, R.ppow(A + e)), e);
}

}  // namespace phigamma
