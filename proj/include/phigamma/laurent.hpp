#pragma once

#include <map>
#include <string>

#include "phigamma/padic.hpp"
#include "phigamma/series.hpp"
#include "json.hpp"

namespace phigamma {

/**
 * Laurent series in pi with PAdic coefficients on the window [lo, hi].
 *
 * Without the tail flag the value is exactly the stored Laurent polynomial;
 * with it, coefficients above hi are unknown.
 */
class TruncatedLaurent {
public:
    TruncatedLaurent() = default;
    TruncatedLaurent(u64 p, int N, int lo, int hi, bool tail = false);

    static TruncatedLaurent monomial(u64 p, int N, int k, const PAdic& a);
    static TruncatedLaurent monomial(u64 p, int N, int k, i64 a = 1);
    /// sum_i a[i] pi^{lo+i}, exact.
    static TruncatedLaurent from_ints(u64 p, int N, int lo, const std::vector<i64>& a);
    static TruncatedLaurent from_zl(u64 p, int N, const ZL& f, int lo, int hi, bool tail);

    u64 p() const { return p_; }
    int N() const { return N_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    bool tail() const { return tail_; }
    const std::map<int, PAdic>& coeffs() const { return c_; }

    PAdic coeff(int k) const;
    void set(int k, const PAdic& a);
    bool is_zero() const;
    /// Lowest exponent with a nonzero coefficient.
    int order() const;
    int max_denom_exp() const;
    /// Integral residues scaled by p^E, where E = max_denom_exp().
    ZL scaled(int& E) const;

    /// Equal on the common window at the available precision.
    bool equals(const TruncatedLaurent& o) const;
    /// Copy truncated to exponents <= h (sets the tail flag if anything is cut).
    TruncatedLaurent truncate(int h) const;

    std::string str() const;

private:
    u64 p_ = 3;
    int N_ = 1;
    int lo_ = 0, hi_ = 0;
    bool tail_ = false;
    std::map<int, PAdic> c_;
};

/**
 * Element c = omega(a) (1+p)^s of Z_p^x, stored exactly modulo p^M with M
 * large enough that (1+pi)^c is determined on every supported window.
 */
struct GammaElement {
    u64 p = 3;
    int N = 1;
    u64 a = 1;
    i64 s = 0;
    u64 c = 1;  // residue mod p^M

    static GammaElement make(u64 p, int N, u64 a, i64 s);
    static GammaElement generator(u64 p, int N) { return make(p, N, 1, 1); }
    GammaElement operator*(const GammaElement& o) const;
    GammaElement inverse() const;
    PAdic value() const;
};

TruncatedLaurent series_add(const TruncatedLaurent& f, const TruncatedLaurent& g);
TruncatedLaurent series_sub(const TruncatedLaurent& f, const TruncatedLaurent& g);
TruncatedLaurent series_scale(const TruncatedLaurent& f, const PAdic& a);
/// Product; exponents above `cap` are discarded and flagged.
TruncatedLaurent series_mul(const TruncatedLaurent& f, const TruncatedLaurent& g,
                            int cap = kWindowCap);
/// Inverse of pi^m u with u(0) nonzero; output window is [-m, hi - 2m] for input window top hi.
TruncatedLaurent series_invert(const TruncatedLaurent& f, int hi_out);
TruncatedLaurent series_invert(const TruncatedLaurent& f);

TruncatedLaurent frobenius_series(const TruncatedLaurent& f, int cap = kWindowCap);
TruncatedLaurent gamma_series(const TruncatedLaurent& f, const GammaElement& c);
TruncatedLaurent log_one_plus_pi(u64 p, int N, int hi);
TruncatedLaurent psi_series(const TruncatedLaurent& f);
TruncatedLaurent trace_phi(const TruncatedLaurent& f);
PAdic residue(const TruncatedLaurent& f);
/// res(f g (1+pi)^{-1}).
PAdic iwasawa_pairing(const TruncatedLaurent& f, const TruncatedLaurent& g);

/// Smallest pi-valuation of psi on pi^H Z/p^N[[pi]].
int psi_valuation_bound(SeriesRing& ring, int H);
/// Largest pole order of psi on pi^{-L} Z/p^N[[pi]].
int psi_pole_bound(SeriesRing& ring, int L);

nlohmann::json to_json(const TruncatedLaurent& f);
TruncatedLaurent laurent_from_json(const nlohmann::json& j);

}  // namespace phigamma
