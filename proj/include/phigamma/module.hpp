#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "phigamma/laurent.hpp"

namespace phigamma {

/// Square matrix of Laurent series, row-major.
using LaurentMatrix = std::vector<std::vector<TruncatedLaurent>>;
using ScalarMatrix = std::vector<std::vector<PAdic>>;

/**
 * Rank-d (phi, Gamma)-module.  `phi` and `gam` give the images of the basis
 * (column j is the image of e_j); `gam` is the action of gamma_0 with
 * chi(gamma_0) = 1+p, `delta` the action of omega(g) for g the smallest
 * primitive root mod p, acting semilinearly through gamma_{omega(g)}.
 */
struct PhiGammaModule {
    u64 p = 3;
    int N = 12;
    int rank = 0;
    LaurentMatrix phi, gam;
    ScalarMatrix delta;

    nlohmann::json to_json() const;
    static PhiGammaModule from_json(const nlohmann::json& j);
    /// Same data reinterpreted at precision N2 (mantissas lifted as representatives).
    PhiGammaModule at_precision(int N2) const;
};

LaurentMatrix mat_mul(const LaurentMatrix& A, const LaurentMatrix& B);
LaurentMatrix mat_transpose(const LaurentMatrix& A);
/// Inverse by Gauss-Jordan elimination; pivots are inverted with `hi_out` as the output window top.
LaurentMatrix mat_inverse(const LaurentMatrix& A, int hi_out = 64);
TruncatedLaurent mat_det(const LaurentMatrix& A);
LaurentMatrix mat_apply(const LaurentMatrix& A, const std::function<TruncatedLaurent(const TruncatedLaurent&)>& f);

/// Rank-1 module with phi = lam and gamma_0 = (1+p)^n; Delta = omega(g)^n.
PhiGammaModule module_from_character(const PAdic& lam, int n);
/// R(n) at (p, N).
PhiGammaModule twist_module(u64 p, int N, int n);
PhiGammaModule zero_module(u64 p, int N);
/// Diagonal phi with the given entries, trivial Gamma.
PhiGammaModule diagonal_phi_module(const std::vector<PAdic>& entries);

struct CommutationDefect {
    bool zero = true;       // defect vanishes at working precision
    int valuation = 0;      // smallest valuation among nonzero defect coefficients
    int exponent = 0;       // pi-exponent where it occurs
    int row = 0, col = 0;
};

/// Phi * phi(Gam) - Gam * gamma_0(Phi) on the common window.
CommutationDefect check_commutation(const PhiGammaModule& M);
/// Delta commutes with Phi and Gam and Delta^{p-1} = 1.
CommutationDefect check_delta(const PhiGammaModule& M);

PhiGammaModule direct_sum(const PhiGammaModule& A, const PhiGammaModule& B);
PhiGammaModule tensor(const PhiGammaModule& A, const PhiGammaModule& B);
PhiGammaModule dual(const PhiGammaModule& M);
PhiGammaModule cartier_dual(const PhiGammaModule& M);
/// M(m): phi multiplied by p^{-m}.
PhiGammaModule slope_twist(const PhiGammaModule& M, int m);

struct DegreeSlope {
    int degree = 0;
    int num = 0, den = 1;  // slope in lowest terms
};

/// Valuation a of det(Phi) = p^a u; throws outside the desk-scope unit shape.
DegreeSlope degree_slope(const PhiGammaModule& M);
bool is_etale(const PhiGammaModule& M);

struct HNSegment {
    int num = 0, den = 1;  // slope
    int multiplicity = 0;
};
using HNPolygon = std::vector<HNSegment>;

HNPolygon hn_polygon_split(const PhiGammaModule& M);

}  // namespace phigamma
