#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "phigamma/zq.hpp"

namespace phigamma {

/// Laurent polynomial sum_i c[i] pi^{lo+i} with coefficients in Z/p^N.
struct ZL {
    int lo = 0;
    std::vector<u64> c;

    bool empty() const { return c.empty(); }
    int hi() const { return lo + static_cast<int>(c.size()) - 1; }
    u64 at(int k) const {
        return (k < lo || k > hi()) ? 0 : c[static_cast<std::size_t>(k - lo)];
    }
    void trim();
    /// Lowest exponent with a nonzero coefficient (INT_MAX if none).
    int valuation() const;
    static ZL mono(int k, u64 a = 1) { return ZL{k, {a}}; }
};

/// Number of base-p digits after N kept in exponents of (1+pi)^c.
int gamma_guard(u64 p);

/// Largest window exponent magnitude supported by the Gamma exponent guard.
constexpr int kWindowCap = 4096;

/**
 * Integral Laurent arithmetic over Z/p^N with phi, gamma_c and psi on monomials.
 *
 * phi(pi^{-1}) uses the terminating expansion pi^{-p} (1+z)^{-1}, z = sum C(p,k) pi^{k-p},
 * so every operator below is exact on Laurent polynomials except gamma, whose
 * images are truncated at an explicit top exponent.
 */
class SeriesRing {
public:
    SeriesRing(u64 p, int N);

    const Zq& R() const { return R_; }
    u64 p() const { return R_.p; }
    int N() const { return R_.N; }
    /// Modulus p^M for Gamma exponents.
    const Zq& RM() const { return RM_; }

    ZL add(const ZL& a, const ZL& b) const;
    ZL sub(const ZL& a, const ZL& b) const;
    ZL scale(const ZL& a, u64 s) const;
    /// Product with exponents >= top dropped.
    ZL mul(const ZL& a, const ZL& b, int top) const;
    ZL mul(const ZL& a, const ZL& b) const;
    ZL pow(const ZL& a, u64 e, int top) const;
    /// Inverse of pi^m u (u(0) a unit) modulo pi^top.
    ZL invert(const ZL& a, int top) const;

    /// Exact images of pi^k.
    const ZL& phi_mono(int k);
    ZL phi(const ZL& f);
    const ZL& psi_mono(int k);
    ZL psi(const ZL& f);
    /// (1+pi)^c - 1 modulo pi^top, for c a residue mod p^M.
    ZL gamma_pi(u64 c, int top) const;
    /// gamma_c(pi^k) modulo pi^top for k in [kmin, top).
    const std::vector<ZL>& gamma_table(u64 c, int kmin, int top);

    /// Binomial coefficient mod p^N.
    u64 binom(int n, int k);

private:
    void ensure_pascal(int n);

    Zq R_, RM_;
    int acc_limit_;
    ZL phipi_, phipi_inv_;
    std::map<int, ZL> phi_cache_, psi_cache_;
    std::vector<std::vector<u64>> pascal_;
    std::map<std::tuple<u64, int, int>, std::vector<ZL>> gamma_cache_;
    std::mutex mu_;
};

/// Shared ring instance per (p, N).
std::shared_ptr<SeriesRing> series_ring(u64 p, int N);

}  // namespace phigamma
