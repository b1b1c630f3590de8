#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "phigamma/engine.hpp"

namespace phigamma {

/// Rebuilds a module at a requested precision (used by refinement).
using ModuleFactory = std::function<PhiGammaModule(int N)>;

struct HerrParams {
    int D = 60;        // window size at the first level
    int G = 4;         // guard digits; precision step per level
    int dD = 0;        // window step per level (0 means D / 2)
    int levels = 2;    // levels always computed
    int max_levels = 3;
    int H = 0;         // positive window of the phi-complex (0 means p)
};

/// Cohomology in one degree: dimension, torsion exponents and all invariant-factor exponents.
struct DegreeData {
    int dim = 0;
    std::vector<int> torsion;   // Z/p^a summands with 0 < a < N - G
    std::vector<int> divisors;  // every a (a >= N - G counts toward dim)
    bool operator==(const DegreeData& o) const { return dim == o.dim && torsion == o.torsion; }
};

struct LevelData {
    int D = 0, N = 0;
    std::array<DegreeData, 3> deg;
};

struct CohomologyReport {
    std::string complex;  // "phi" or "psi"
    u64 p = 3;
    int N = 12, D = 60, G = 4;
    std::array<int, 3> dims{};
    std::array<std::vector<int>, 3> divisors, torsion;
    std::array<bool, 3> converged{};
    std::vector<LevelData> levels;
    CommutationDefect defect;

    bool all_converged() const { return converged[0] && converged[1] && converged[2]; }
    nlohmann::json to_json() const;
};

/// A windowed three-term complex in Delta-projected coordinates.
struct WindowComplex {
    std::array<Space, 3> sp;
    std::array<Projection, 3> pr;
    std::array<Mat, 2> d;      // projected differentials
    std::array<Mat, 2> dfull;  // differentials in full coordinates
};

/// phi-complex on S[-L, H) -> S[-L1, H) + S[-L, H) -> S[-L1, H), L1 the pole bound of phi.
WindowComplex phi_complex(ModuleEngine& E, int L, int H);
/// psi-complex on S[-L, H) -> S[-L, Hp) + S[-L, H) -> S[-L, Hp), Hp the psi valuation bound.
WindowComplex psi_complex(ModuleEngine& E, int L, int H);

/**
 * Image of H^i(src) in H^i(dst) under the projected chain maps J, reported as
 * invariant factors of the image module.
 */
std::array<DegreeData, 3> persistent_cohomology(const Zq& R, int G, const WindowComplex& src,
                                                const WindowComplex& dst, const std::array<Mat, 3>& J);
std::array<DegreeData, 3> plain_cohomology(const Zq& R, int G, const WindowComplex& C);

CohomologyReport herr_complex(const ModuleFactory& M, u64 p, int N, const HerrParams& params = {});
CohomologyReport herr_complex(const PhiGammaModule& M, const HerrParams& params = {});
CohomologyReport psi_herr_complex(const ModuleFactory& M, u64 p, int N, const HerrParams& params = {});
CohomologyReport psi_herr_complex(const PhiGammaModule& M, const HerrParams& params = {});

struct ComparisonResult {
    bool chain_map = false;            // squares commute exactly
    std::array<int, 3> image_dims{};   // dims of the image of H^i_phi in H^i_psi
    std::array<int, 3> phi_dims{}, psi_dims{};
    bool isomorphism = false;
    nlohmann::json to_json() const;
};

/// Chain map (id, sign * psi) from the phi-complex to the psi-complex.
ComparisonResult compare_phi_psi(const ModuleFactory& M, u64 p, int N, const HerrParams& params = {}, int sign = -1);
ComparisonResult compare_phi_psi(const PhiGammaModule& M, const HerrParams& params = {}, int sign = -1);

/// h0 - h1 + h2; throws unless the report converged.
int euler_characteristic(const CohomologyReport& r);

/// e_Delta applied to a flattened vector on the window [lo, hi).
std::vector<u64> delta_projector(const PhiGammaModule& M, int lo, int hi, const std::vector<u64>& v);

struct KernelReport {
    int dim = 0;                                 // zero-at-precision divisors plus surplus columns
    std::vector<int> divisors;                   // SNF exponents
    std::vector<std::vector<std::pair<int, u64>>> basis;  // kernel vectors as (exponent, coefficient)
};

/// Kernel of p^n phi - 1 on the scalar window S[-L, H) -> S[-L1, H).
KernelReport scalar_phi_kernel(u64 p, int N, int G, int n, int L, int H);

nlohmann::json to_json(const DegreeData& d);

}  // namespace phigamma
