#include "phigamma/pairing.hpp"

namespace phigamma {

namespace {

using PairFn = std::pair<PAdic, PAdic> (*)(const TruncatedLaurent&, const TruncatedLaurent&);

std::pair<PAdic, PAdic> phi_phi_pair(const TruncatedLaurent& x, const TruncatedLaurent& y) {
    return {iwasawa_pairing(frobenius_series(x), frobenius_series(y)), iwasawa_pairing(x, y)};
}

std::pair<PAdic, PAdic> phi_psi_pair(const TruncatedLaurent& x, const TruncatedLaurent& y) {
    return {iwasawa_pairing(frobenius_series(x), y), iwasawa_pairing(x, psi_series(y))};
}

AdjunctionReport brute_force(u64 p, int N, int J, PairFn fn, const char* law) {
    AdjunctionReport rep;
    rep.law = law;
    rep.constant = PAdic::zero(p, N);
    bool have = false;
    bool ok = true;
    std::vector<std::pair<PAdic, PAdic>> vals;
    for (int i = -J; i <= J; ++i)
        for (int j = -J; j <= J; ++j) {
            auto v = fn(TruncatedLaurent::monomial(p, N, i, 1), TruncatedLaurent::monomial(p, N, j, 1));
            ++rep.pairs_total;
            if (!v.second.is_zero()) ++rep.pairs_nonzero;
            if (!have && !v.second.is_zero() && valuation(v.second).value == 0) {
                rep.constant = v.first * v.second.inverse();
                have = true;
            }
            vals.push_back(v);
        }
    for (auto& [a, b] : vals)
        if (!(a - rep.constant * b).is_zero()) ok = false;
    rep.consistent = have && ok;
    return rep;
}

}  // namespace

nlohmann::json AdjunctionReport::to_json() const {
    return {{"law", law},
            {"consistent", consistent},
            {"constant", constant.str()},
            {"pairs_total", pairs_total},
            {"pairs_nonzero", pairs_nonzero}};
}

AdjunctionReport phi_phi_constant(u64 p, int N, int J) {
    return brute_force(p, N, J, phi_phi_pair, "<phi x, phi y> = c <x, y>");
}

AdjunctionReport phi_psi_constant(u64 p, int N, int J) {
    return brute_force(p, N, J, phi_psi_pair, "<phi x, y> = c <x, psi y>");
}

bool phi_phi_holds(const TruncatedLaurent& x, const TruncatedLaurent& y, const PAdic& c) {
    auto [a, b] = phi_phi_pair(x, y);
    return (a - c * b).is_zero();
}

bool phi_psi_holds(const TruncatedLaurent& x, const TruncatedLaurent& y, const PAdic& c) {
    auto [a, b] = phi_psi_pair(x, y);
    return (a - c * b).is_zero();
}

}  // namespace phigamma
