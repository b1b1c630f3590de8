#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phigamma/laurent.hpp"
#include "phigamma/zq.hpp"

namespace phigamma {

struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n, i64 d = 1);
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return !(o < *this); }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

/**
 * Truncated Laurent series in tbar with exponents in p^{-level} Z and
 * coefficients in F_p.  Exponent num / p^level is known when num < hi.
 */
struct PerfLaurent {
    static constexpr i64 kExact = i64(1) << 60;

    u64 p = 3;
    int level = 0;
    std::map<i64, u64> terms;
    i64 hi = kExact;

    PerfLaurent() = default;
    explicit PerfLaurent(u64 p_) : p(p_) {}

    static PerfLaurent monomial(u64 p, i64 num, int level, u64 c = 1);
    /// tbar^e truncated: all exponents >= cap are unknown.
    static PerfLaurent unknown_above(u64 p, i64 cap);

    bool exact() const { return hi >= kExact; }
    bool is_zero() const { return terms.empty(); }
    PerfLaurent at_level(int L) const;
    void normalize();
    /// Lowest known exponent; throws on zero.
    Rational lowest() const;
    /// Known bound as an exponent (only meaningful when not exact).
    Rational bound() const { return Rational(hi, static_cast<i64>(ipow(p, level))); }
    u64 coeff(i64 num, int lv) const;
    nlohmann::json to_json() const;
};

PerfLaurent perf_add(const PerfLaurent& a, const PerfLaurent& b);
PerfLaurent perf_neg(const PerfLaurent& a);
PerfLaurent perf_sub(const PerfLaurent& a, const PerfLaurent& b);
PerfLaurent perf_mul(const PerfLaurent& a, const PerfLaurent& b);
PerfLaurent perf_scale(const PerfLaurent& a, u64 c);
PerfLaurent perf_pow(const PerfLaurent& a, i64 e, i64 cap);
/// x^p.
PerfLaurent perf_frobenius(const PerfLaurent& a);
/// x^{1/p}, one level up.
PerfLaurent perf_root(const PerfLaurent& a);
/// Inverse, with exponents below cap (in tbar units) when the input is exact.
PerfLaurent perf_invert(const PerfLaurent& a, i64 cap);
/// a and b agree on every exponent both know.
bool perf_equal(const PerfLaurent& a, const PerfLaurent& b);
/// The ring map induced by 1 + tbar -> (1 + tbar)^c.
PerfLaurent perf_gamma(const PerfLaurent& a, i64 c, i64 cap);

/// v(x) = lowest exponent times p/(p-1).
Rational tilt_valuation(const PerfLaurent& x);

/**
 * p-typical Witt vector of length <= 4 over the perfect Laurent ring, with
 * an optional p-denominator: the value is p^{-denom_exp} (comps).
 */
struct WittVector {
    u64 p = 3;
    int length = 3;
    int denom_exp = 0;
    std::vector<PerfLaurent> comps;

    nlohmann::json to_json() const;
};

constexpr int kMaxWittLength = 4;

WittVector witt_zero(u64 p, int length);
WittVector witt_one(u64 p, int length);
WittVector teichmuller(const PerfLaurent& x, int length);
WittVector verschiebung(const WittVector& x);
WittVector witt_frobenius(const WittVector& x);
WittVector witt_add(const WittVector& x, const WittVector& y);
WittVector witt_neg(const WittVector& x);
WittVector witt_sub(const WittVector& x, const WittVector& y);
WittVector witt_mul(const WittVector& x, const WittVector& y);
/// Image of an integer residue (taken mod p^length) in W(F_p).
WittVector witt_scalar(u64 p, int length, i64 c);
WittVector witt_mul_p(const WittVector& x);
WittVector witt_invert(const WittVector& x, i64 cap);
WittVector witt_pow(const WittVector& x, i64 e, i64 cap);
WittVector witt_gamma(const WittVector& x, i64 c, i64 cap);
/// Equality of values on every known coefficient, after clearing denominators.
bool witt_equal(const WittVector& x, const WittVector& y);

/// |x|_r = p^{-exponent}; zero vectors report zero = true.
struct NormValue {
    u64 p = 3;
    bool zero = false;
    Rational exponent;
    double value() const;
};

/// max_n p^{-n} |xbar_n|^r, where xbar_n = x_n^{p^{-n}} are the Teichmuller coordinates.
NormValue witt_gauss_norm(const WittVector& x, const Rational& r);

/// Element of Z/p^N[X]/(X^{p^M} - 1), read modulo the p^M-th cyclotomic polynomial.
struct CycloLevel {
    u64 p = 3;
    int N = 8;
    int M = 1;
    int denom_exp = 0;
    std::vector<u64> c;

    static CycloLevel zero(u64 p, int N, int M);
    static CycloLevel constant(u64 p, int N, int M, i64 a);
    /// Primitive p^j-th root of unity X^{p^{M-j}}.
    static CycloLevel root_of_unity(u64 p, int N, int M, int j);

    int degree() const;
    /// Coefficients of the reduction modulo Phi_{p^M}.
    std::vector<u64> reduced() const;
    /// Minimal p-adic valuation of the reduced coefficients (N - denom_exp when zero).
    int valuation() const;
    CycloLevel raise(int M2) const;
    nlohmann::json to_json() const;
};

CycloLevel cyclo_add(const CycloLevel& a, const CycloLevel& b);
CycloLevel cyclo_sub(const CycloLevel& a, const CycloLevel& b);
CycloLevel cyclo_mul(const CycloLevel& a, const CycloLevel& b);
CycloLevel cyclo_pow(const CycloLevel& a, u64 e);

struct ThetaParams {
    int m = 3;
    int N = 8;
    int G = 4;
    int guard = 0;
    /// Ambient level; 0 picks the smallest level that holds every lift.
    int M = 0;
};

/// Sum over n of p^n (xbar_n)^sharp, each sharp computed by root, lift, re-power.
CycloLevel theta_map(const WittVector& w, const ThetaParams& P);
/// Level the lift of w needs under P.
int theta_level(const WittVector& w, const ThetaParams& P);

/// sum_{i<p} [(1 + tbar)^{p^k}]^i; k = -1 is the literal generator of ker theta at level 0.
WittVector xi_element(u64 p, int length, int k);

/// Teichmuller expansion sum p^k [y_k] with k possibly negative.
struct TeichExpansion {
    u64 p = 3;
    std::vector<std::pair<int, PerfLaurent>> terms;
};

struct PhiEigenResult {
    TeichExpansion element;
    Rational defect_exponent;
    Rational bound_exponent;
    bool below_bound = false;
    nlohmann::json to_json() const;
};

/// sum_{n=-T}^{T} p^{-n} [xbar^{p^n}] and the |.|_r size of phi(x) - p x.
PhiEigenResult phi_eigen_element(const PerfLaurent& xbar, int T, const Rational& r);

NormValue expansion_norm(const TeichExpansion& x, const Rational& r);

/// f evaluated at pi = [1 + tbar] - 1.
WittVector embed_pi(const TruncatedLaurent& f, int length, i64 cap);

}  // namespace phigamma
