#pragma once

#include <vector>

#include "phigamma/herr.hpp"

namespace phigamma {

/// Element of a module: one series per basis vector.
using ModuleElement = std::vector<TruncatedLaurent>;

struct PsiBasis {
    std::vector<ModuleElement> vectors;
    int dim = 0;
    std::vector<int> torsion;  // kernel summands known only modulo p^a, 0 < a < N - G
    bool stabilized = false;
    std::vector<int> level_dims;
    int L = 0, H = 0;
    nlohmann::json to_json() const;
};

struct IwasawaParams {
    int D = 60;
    int G = 4;
    int dD = 0;  // 0 means D / 2
};

/// Kernel of psi - 1 on Laurent polynomials with exponents in [-L, H].
PsiBasis psi_fixed_points(const PhiGammaModule& M, const IwasawaParams& params = {});
/// Kernel of psi on Laurent polynomials with exponents in [-L, H].
PsiBasis psi_kernel(const PhiGammaModule& M, const IwasawaParams& params = {});
/// Kernel of phi - 1 on Laurent polynomials with exponents in [-L, H].
PsiBasis phi_fixed_points(const PhiGammaModule& M, const IwasawaParams& params = {});

struct ExactSequenceReport {
    int phi1_dim = 0, psi1_dim = 0;
    int kernel_on_psi1 = 0;       // dim of ker(phi - 1) restricted to M^{psi=1}
    bool phi1_in_psi1 = false;    // M^{phi=1} is contained in M^{psi=1}
    bool image_in_psi0 = false;   // psi((phi - 1) v) = 0 for v in M^{psi=1}
    std::vector<ModuleElement> images;
    bool clean() const { return phi1_in_psi1 && image_in_psi0 && kernel_on_psi1 == phi1_dim; }
    nlohmann::json to_json() const;
};

ExactSequenceReport exact_sequence_check(const PhiGammaModule& M, const IwasawaParams& params = {});

struct CoinvariantReport {
    int dim = 0;
    std::vector<int> divisors, torsion;
    bool stabilized = false;
    std::vector<int> level_dims;
    nlohmann::json to_json() const;
};

/// Cokernel of psi - 1 on S[-L, 2D) -> S[-L, psi bound), refined like the Herr protocol.
CoinvariantReport psi_coinvariants(const PhiGammaModule& M, const IwasawaParams& params = {});

struct SolveResult {
    bool consistent = false;
    ModuleElement v;       // solution modulo pi^H, with p-denominators
    int denom_exp = 0;     // common denominator p^s
    bool residual_zero = false;
    bool psi_zero = false;
    int L = 0, H = 0;
    nlohmann::json to_json() const;
};

/// Solve (gamma_0 - 1) v = w with psi(v) = 0 on the window S[-L, H), L the pole order of w.
SolveResult solve_gamma_minus_one(const PhiGammaModule& M, const ModuleElement& w, int H = 120);

struct H1Class {
    ModuleElement a, b;
    int denom_exp = 0;
    bool cocycle = false;       // (gamma_0 - 1) a = (phi - 1) b at precision
    int class_valuation = 0;    // valuation of the class against a generator of H^1
    bool nonzero = false;
    nlohmann::json to_json() const;
};

H1Class h1_iwasawa_class(const PhiGammaModule& M, const ModuleElement& v, int H = 120, int G = 4);

/**
 * Cyclotomic deformation truncated at T^k: phi and gamma_0 as polynomials in T
 * of degree < k with matrix coefficients; gamma_0 acts on the base by Gam (1+T).
 */
struct DeformationModule {
    PhiGammaModule base;
    int k = 1;
    std::vector<LaurentMatrix> phi_T, gam_T;  // coefficients of T^0 .. T^{k-1}
    /// The same data as a module of rank d k over the basis e_j T^i.
    PhiGammaModule as_module() const;
    nlohmann::json to_json() const;
};

DeformationModule deformation_build(const PhiGammaModule& M, int k);
/// Evaluate at the character chi^n: T = (1+p)^n - 1, Delta multiplied by omega(g)^n.
PhiGammaModule deformation_specialize(const DeformationModule& DM, int n);
/// Commutation defect of each T-degree.
std::vector<CommutationDefect> deformation_defects(const DeformationModule& DM);

struct DeformationIdentities {
    std::vector<int> levels;
    std::vector<int> invariant_dims, coinvariant_dims;
    std::vector<bool> coinvariants_surjective;  // M (x) 1 maps onto the coinvariants
    std::vector<std::array<int, 3>> psi_gamma_dims;
    int psi_fixed_dim = 0;
    nlohmann::json to_json() const;
};

DeformationIdentities deformation_gamma_identities(const PhiGammaModule& M, int k, int D = 30, int G = 4);

struct DcrysResult {
    int weight = 0;
    PAdic eigenvalue;
    bool series_check = false;  // phi(t^{-w}) = p^{-w} t^{-w} on a test window
    nlohmann::json to_json() const;
};

DcrysResult dcrys_rank1(const PhiGammaModule& M, int J = 20);

}  // namespace phigamma
