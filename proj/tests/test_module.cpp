#include "doctest.h"
#include "phigamma/herr.hpp"
#include "phigamma/module.hpp"

using namespace phigamma;

namespace {

bool same_data(const PhiGammaModule& A, const PhiGammaModule& B) {
    if (A.rank != B.rank) return false;
    for (int i = 0; i < A.rank; ++i)
        for (int j = 0; j < A.rank; ++j)
            if (!A.phi[i][j].equals(B.phi[i][j]) || !A.gam[i][j].equals(B.gam[i][j]) || !(A.delta[i][j] == B.delta[i][j])) return false;
    return true;
}

}  // namespace

TEST_CASE("twists are consistent (phi, Gamma)-modules") {
    for (u64 p : {3u, 5u})
        for (int n = -2; n <= 2; ++n) {
            PhiGammaModule M = twist_module(p, 12, n);
            CHECK(check_commutation(M).zero);
            CHECK(check_delta(M).zero);
        }
}

TEST_CASE("Gamma acts on R(n) through (1+p)^n") {
    const u64 p = 3;
    const int N = 10;
    PhiGammaModule M = twist_module(p, N, 2);
    CHECK(M.gam[0][0].equals(TruncatedLaurent::monomial(p, N, 0, 16)));
    PhiGammaModule Mi = twist_module(p, N, -1);
    CHECK(series_mul(Mi.gam[0][0], TruncatedLaurent::monomial(p, N, 0, 4)).equals(TruncatedLaurent::monomial(p, N, 0, 1)));
}

TEST_CASE("tensor, dual and Cartier dual of twists") {
    const u64 p = 5;
    const int N = 10;
    for (int a = -2; a <= 2; ++a) {
        CHECK(same_data(dual(twist_module(p, N, a)), twist_module(p, N, -a)));
        CHECK(same_data(cartier_dual(twist_module(p, N, a)), twist_module(p, N, 1 - a)));
        for (int b = -2; b <= 2; ++b) CHECK(same_data(tensor(twist_module(p, N, a), twist_module(p, N, b)), twist_module(p, N, a + b)));
    }
}

TEST_CASE("direct sums and json round trip") {
    PhiGammaModule S = direct_sum(twist_module(3, 12, 0), twist_module(3, 12, 1));
    CHECK(S.rank == 2);
    CHECK(check_commutation(S).zero);
    CHECK(S.phi[0][1].is_zero());
    CHECK(same_data(PhiGammaModule::from_json(S.to_json()), S));
}

TEST_CASE("degree, slope and Harder-Narasimhan polygon") {
    const u64 p = 3;
    const int N = 12;
    PhiGammaModule M = diagonal_phi_module({PAdic::from_int(1, p, N), PAdic::from_int(3, p, N), PAdic::from_int(9, p, N)});
    DegreeSlope ds = degree_slope(M);
    CHECK(ds.degree == 3);
    CHECK(ds.num == 1);
    CHECK(ds.den == 1);
    CHECK_FALSE(is_etale(M));
    HNPolygon hn = hn_polygon_split(M);
    REQUIRE(hn.size() == 3);
    CHECK(hn[0].num == 2);
    CHECK(hn[2].num == 0);
    CHECK(is_etale(twist_module(p, N, 3)));
    DegreeSlope st = degree_slope(slope_twist(twist_module(p, N, 0), 2));
    CHECK(st.degree == -2);
}

TEST_CASE("windowed phi eigenspaces of the scalar ring") {
    const u64 p = 3;
    const int N = 12, G = 4;
    KernelReport k0 = scalar_phi_kernel(p, N, G, 0, 30, 30);
    CHECK(k0.dim == 1);
    REQUIRE(k0.basis.size() == 1);
    for (auto& [e, c] : k0.basis[0]) CHECK(e == 0);
    for (int n = 1; n <= 3; ++n) CHECK(scalar_phi_kernel(p, N, G, n, 30, 30).dim == 0);
}

TEST_CASE("Herr cohomology of small twists") {
    HerrParams P;
    P.D = 30;
    CohomologyReport r0 = herr_complex(twist_module(3, 12, 0), P);
    CHECK(r0.all_converged());
    CHECK(r0.dims == std::array<int, 3>{1, 2, 0});
    CHECK(euler_characteristic(r0) == -1);
    CohomologyReport r1 = psi_herr_complex(twist_module(3, 12, 1), P);
    CHECK(r1.all_converged());
    CHECK(r1.dims == std::array<int, 3>{0, 2, 1});
    CohomologyReport rm = herr_complex(twist_module(3, 12, -1), P);
    CHECK(rm.dims == std::array<int, 3>{0, 1, 0});
}

TEST_CASE("a small window fails to converge rather than reporting wrong numbers") {
    HerrParams P;
    P.D = 4;
    CohomologyReport r = herr_complex(twist_module(3, 12, 0), P);
    CHECK_FALSE(r.all_converged());
    CHECK_THROWS(euler_characteristic(r));
}

TEST_CASE("Delta projector is idempotent") {
    PhiGammaModule M = twist_module(5, 8, 1);
    std::vector<u64> v(12);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 7 * i + 1;
    std::vector<u64> once = delta_projector(M, -4, 8, v);
    CHECK(delta_projector(M, -4, 8, once) == once);
}
