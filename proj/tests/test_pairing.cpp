#include <random>

#include "doctest.h"
#include "phigamma/pairing.hpp"

using namespace phigamma;

namespace {

TruncatedLaurent random_laurent(std::mt19937_64& rng, u64 p, int N, int lo, int hi) {
    TruncatedLaurent f(p, N, lo, hi, false);
    for (int k = lo; k <= hi; ++k) f.set(k, PAdic(p, N, rng() % ipow(p, N)));
    return f;
}

}  // namespace

TEST_CASE("monomial oracle gives a pair-independent constant") {
    for (u64 p : {3u, 5u}) {
        AdjunctionReport a = phi_phi_constant(p, 12, 6);
        AdjunctionReport b = phi_psi_constant(p, 12, 6);
        CHECK(a.consistent);
        CHECK(b.consistent);
        CHECK(a.pairs_nonzero > 0);
        CHECK(b.pairs_nonzero > 0);
        CHECK(a.constant == PAdic::one(p, 12));
        CHECK(b.constant == PAdic::one(p, 12));
    }
}

TEST_CASE("oracle constants hold on random pairs") {
    std::mt19937_64 rng(17);
    for (u64 p : {3u, 5u}) {
        const int N = 12;
        PAdic c1 = phi_phi_constant(p, N, 6).constant;
        PAdic c2 = phi_psi_constant(p, N, 6).constant;
        for (int s = 0; s < 50; ++s) {
            TruncatedLaurent x = random_laurent(rng, p, N, -4, 4), y = random_laurent(rng, p, N, -4, 4);
            CHECK(phi_phi_holds(x, y, c1));
            CHECK(phi_psi_holds(x, y, c2));
        }
        CHECK_FALSE(phi_phi_holds(TruncatedLaurent::monomial(p, N, -1, 1), TruncatedLaurent::monomial(p, N, 0, 1),
                                  PAdic::one(p, N).shift(-1)));
    }
}
