#pragma once

#include <json.hpp>

#include "phigamma/laurent.hpp"

namespace phigamma {

/// Constant c with lhs = c * rhs over a monomial spanning set.
struct AdjunctionReport {
    std::string law;
    bool consistent = false;
    PAdic constant;
    int pairs_total = 0;
    int pairs_nonzero = 0;

    nlohmann::json to_json() const;
};

/// <phi(pi^i), phi(pi^j)> against <pi^i, pi^j> for |i|, |j| <= J.
AdjunctionReport phi_phi_constant(u64 p, int N, int J);
/// <phi(pi^i), pi^j> against <pi^i, psi(pi^j)> for |i|, |j| <= J.
AdjunctionReport phi_psi_constant(u64 p, int N, int J);

/// Checks lhs = c * rhs for a given c on the pair (x, y).
bool phi_phi_holds(const TruncatedLaurent& x, const TruncatedLaurent& y, const PAdic& c);
bool phi_psi_holds(const TruncatedLaurent& x, const TruncatedLaurent& y, const PAdic& c);

}  // namespace phigamma
