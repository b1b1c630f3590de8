#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "phigamma/laurent.hpp"

using namespace phigamma;
using namespace phigamma::oracle;

TEST_CASE("psi is a left inverse of phi") {
    std::mt19937_64 rng(11);
    for (u64 p : {3u, 5u}) {
        const int N = 12;
        for (int s = 0; s < 20; ++s) {
            TruncatedLaurent f = random_laurent(rng, p, N, -6, 12);
            CHECK(psi_series(frobenius_series(f)).equals(f));
            CHECK(series_sub(psi_series(frobenius_series(f)), f).is_zero());
        }
    }
}

TEST_CASE("psi(r phi(s)) = psi(r) s") {
    std::mt19937_64 rng(12);
    for (u64 p : {3u, 5u}) {
        const int N = 12;
        for (int k = 0; k < 20; ++k) {
            TruncatedLaurent r = random_laurent(rng, p, N, -4, 10);
            TruncatedLaurent s = random_laurent(rng, p, N, -3, 6);
            TruncatedLaurent lhs = psi_series(series_mul(r, frobenius_series(s)));
            TruncatedLaurent rhs = series_mul(psi_series(r), s);
            CHECK(series_sub(lhs, rhs).is_zero());
        }
    }
}

TEST_CASE("phi commutes with gamma_c for random c") {
    std::mt19937_64 rng(13);
    for (u64 p : {3u, 5u}) {
        const int N = 12;
        for (int k = 0; k < 20; ++k) {
            GammaElement c = GammaElement::make(p, N, 1 + rng() % (p - 1), static_cast<i64>(rng() % 50));
            TruncatedLaurent f = random_laurent(rng, p, N, -3, 8);
            TruncatedLaurent a = frobenius_series(gamma_series(f, c));
            TruncatedLaurent b = gamma_series(frobenius_series(f), c);
            CHECK(a.equals(b));
        }
    }
}

TEST_CASE("gamma_c gamma_c' = gamma_cc'") {
    std::mt19937_64 rng(14);
    const u64 p = 5;
    const int N = 10;
    for (int k = 0; k < 20; ++k) {
        GammaElement c = GammaElement::make(p, N, 1 + rng() % 4, static_cast<i64>(rng() % 30));
        GammaElement d = GammaElement::make(p, N, 1 + rng() % 4, static_cast<i64>(rng() % 30));
        TruncatedLaurent f = random_laurent(rng, p, N, -2, 10);
        CHECK(gamma_series(gamma_series(f, d), c).equals(gamma_series(f, c * d)));
        CHECK(gamma_series(gamma_series(f, c), c.inverse()).equals(f));
    }
}

TEST_CASE("Tr = p phi psi agrees with the root-of-unity sum on monomials") {
    for (u64 p : {3u, 5u}) {
        const int N = 10;
        for (int j = -10; j <= 10; ++j) {
            TruncatedLaurent m = TruncatedLaurent::monomial(p, N, j, 1);
            TruncatedLaurent tr = trace_phi(m);
            TruncatedLaurent oracle = trace_oracle(p, N, j);
            INFO("p = " << p << ", j = " << j);
            CHECK(series_sub(tr, oracle).is_zero());
        }
    }
}

TEST_CASE("special values of psi") {
    for (u64 p : {3u, 5u}) {
        const int N = 12;
        CHECK(psi_series(TruncatedLaurent::monomial(p, N, 1, 1)).equals(TruncatedLaurent::monomial(p, N, 0, -1)));
        TruncatedLaurent inv = TruncatedLaurent::monomial(p, N, -1, 1);
        CHECK(series_sub(psi_series(inv), inv).is_zero());
        for (int i = 1; i < static_cast<int>(p); ++i) {
            std::vector<i64> c;
            for (int k = 0; k <= i; ++k) c.push_back(binom(i, k));
            CHECK(psi_series(TruncatedLaurent::from_ints(p, N, 0, c)).is_zero());
        }
    }
}

TEST_CASE("phi(t) = p t and gamma_c(t) = c t on [1, D]") {
    for (u64 p : {3u, 5u}) {
        const int N = 12, D = 60;
        TruncatedLaurent t = log_one_plus_pi(p, N, D);
        TruncatedLaurent pt = series_scale(t, PAdic::from_int(static_cast<i64>(p), p, N));
        CHECK(frobenius_series(t).equals(pt));
        GammaElement c = GammaElement::make(p, N, p - 1, 3);
        CHECK(gamma_series(t, c).equals(series_scale(t, c.value())));
    }
}

TEST_CASE("series inverse") {
    const u64 p = 3;
    const int N = 10;
    TruncatedLaurent f = TruncatedLaurent::from_ints(p, N, 1, {2, 1, 5, 7});
    TruncatedLaurent g = series_invert(f, 20);
    CHECK(g.lo() == -1);
    TruncatedLaurent one = TruncatedLaurent::monomial(p, N, 0, 1);
    CHECK(series_mul(f, g).equals(one));
    TruncatedLaurent u = TruncatedLaurent::from_ints(p, N, 0, {1, 1});
    CHECK(series_mul(u, series_invert(u, 12)).equals(one));
}

TEST_CASE("residue and pairing on monomials") {
    const u64 p = 3;
    const int N = 8;
    CHECK(residue(TruncatedLaurent::monomial(p, N, -1, 4)) == PAdic::from_int(4, p, N));
    // (1 + pi)^{-1} = sum (-1)^k pi^k, so <pi^{-1}, pi^{-1}> picks the coefficient of pi^1.
    CHECK(iwasawa_pairing(TruncatedLaurent::monomial(p, N, -1, 1), TruncatedLaurent::monomial(p, N, -1, 1)) == PAdic::from_int(-1, p, N));
    CHECK(iwasawa_pairing(TruncatedLaurent::monomial(p, N, 0, 1), TruncatedLaurent::monomial(p, N, -1, 1)) == PAdic::one(p, N));
    CHECK(iwasawa_pairing(TruncatedLaurent::monomial(p, N, 1, 1), TruncatedLaurent::monomial(p, N, 0, 1)).is_zero());
}

TEST_CASE("json round trip") {
    TruncatedLaurent f = TruncatedLaurent::from_ints(5, 6, -2, {1, 0, 3, 4});
    CHECK(laurent_from_json(to_json(f)).equals(f));
}
