#include "doctest.h"
#include "phigamma/iwasawa.hpp"

using namespace phigamma;

namespace {

IwasawaParams small() {
    IwasawaParams P;
    P.D = 30;
    return P;
}

bool same_data(const PhiGammaModule& A, const PhiGammaModule& B) {
    if (A.rank != B.rank) return false;
    for (int i = 0; i < A.rank; ++i)
        for (int j = 0; j < A.rank; ++j)
            if (!A.phi[i][j].equals(B.phi[i][j]) || !A.gam[i][j].equals(B.gam[i][j]) || !(A.delta[i][j] == B.delta[i][j])) return false;
    return true;
}

}  // namespace

TEST_CASE("psi-fixed points of the trivial module are spanned by 1 and pi^{-1}") {
    PsiBasis b = psi_fixed_points(twist_module(3, 12, 0), small());
    CHECK(b.stabilized);
    CHECK(b.dim == 2);
    for (auto& v : b.vectors) {
        REQUIRE(v.size() == 1);
        CHECK(series_sub(psi_series(v[0]), v[0]).is_zero());
    }
}

TEST_CASE("phi-fixed points sit inside psi-fixed points") {
    for (int n = -1; n <= 1; ++n) {
        ExactSequenceReport es = exact_sequence_check(twist_module(3, 12, n), small());
        INFO("n = " << n);
        CHECK(es.clean());
        CHECK(es.phi1_dim == 1);
    }
}

TEST_CASE("coinvariants stabilize and match phi-invariants of the Cartier dual") {
    for (int n : {0, 1}) {
        PhiGammaModule M = twist_module(3, 12, n);
        CoinvariantReport co = psi_coinvariants(cartier_dual(M), small());
        CHECK(co.stabilized);
        CHECK(co.dim == exact_sequence_check(M, small()).phi1_dim);
    }
}

TEST_CASE("psi kernel persists under window growth") {
    PsiBasis k = psi_kernel(twist_module(3, 12, 1), small());
    CHECK(k.stabilized);
    CHECK(k.dim > 0);
}

TEST_CASE("gamma - 1 is solvable on M^{psi=0}") {
    const u64 p = 3;
    const int N = 12;
    PhiGammaModule M = twist_module(p, N, 0);
    TruncatedLaurent inv = TruncatedLaurent::monomial(p, N, -1, 1);
    ModuleElement w{series_sub(frobenius_series(inv), inv)};
    SolveResult s = solve_gamma_minus_one(M, w, 60);
    CHECK(s.consistent);
    CHECK(s.residual_zero);
    CHECK(s.psi_zero);
    ModuleElement bad{TruncatedLaurent::monomial(p, N, 0, 1)};
    CHECK_THROWS(solve_gamma_minus_one(M, bad, 60));
    CHECK(solve_gamma_minus_one(M, {TruncatedLaurent(p, N, 0, 4)}, 60).residual_zero);
}

TEST_CASE("Iwasawa H^1 classes are cocycles") {
    const u64 p = 3;
    const int N = 12;
    for (int n : {0, 1}) {
        PhiGammaModule M = twist_module(p, N, n);
        H1Class h = h1_iwasawa_class(M, {TruncatedLaurent::monomial(p, N, -1, 1)}, 60, 4);
        CHECK(h.cocycle);
    }
}

TEST_CASE("cyclotomic deformation") {
    const u64 p = 3;
    const int N = 12;
    for (int k = 1; k <= 3; ++k) {
        DeformationModule DM = deformation_build(twist_module(p, N, 0), k);
        for (auto& d : deformation_defects(DM)) CHECK(d.zero);
        CHECK(check_commutation(DM.as_module()).zero);
    }
    DeformationModule D1 = deformation_build(twist_module(p, N, 1), 1);
    CHECK(same_data(deformation_specialize(D1, 0), twist_module(p, N, 1)));
    CHECK_THROWS(deformation_specialize(D1, 1));
    DeformationModule D3 = deformation_build(twist_module(p, N, 0), 3);
    for (int n = -2; n <= 2; ++n) CHECK(same_data(deformation_specialize(D3, n), twist_module(p, N, n)));
}

TEST_CASE("crystalline period of a rank-one module") {
    const u64 p = 3;
    const int N = 12;
    DcrysResult d = dcrys_rank1(module_from_character(PAdic::one(p, N), 1));
    CHECK(d.weight == 1);
    CHECK(d.series_check);
    CHECK(d.eigenvalue * PAdic::from_int(3, p, N) == PAdic::one(p, N));
    CHECK(dcrys_rank1(twist_module(p, N, 0)).weight == 0);
}
