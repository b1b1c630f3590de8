#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "phigamma/witt.hpp"

using namespace phigamma;
using namespace phigamma::oracle;

namespace {

PerfLaurent one_plus_t(u64 p) { return perf_add(PerfLaurent::monomial(p, 0, 0), PerfLaurent::monomial(p, 1, 0)); }

}  // namespace

TEST_CASE("[1] + [1] = (2, 1) in W_2(F_3)") {
    WittVector two = witt_add(witt_one(3, 2), witt_one(3, 2));
    CHECK(two.comps[0].coeff(0, 0) == 2);
    CHECK(two.comps[1].coeff(0, 0) == 1);
}

TEST_CASE("Witt vectors of F_p agree with integers mod p^length") {
    for (u64 p : {3u, 5u})
        for (int len = 1; len <= 4; ++len) {
            const i64 q = static_cast<i64>(ipow(p, static_cast<u64>(len)));
            for (i64 a = 0; a < std::min<i64>(q, 30); ++a)
                for (i64 b = 0; b < std::min<i64>(q, 30); b += 7) {
                    CHECK(witt_equal(witt_add(witt_scalar(p, len, a), witt_scalar(p, len, b)), witt_scalar(p, len, a + b)));
                    CHECK(witt_equal(witt_mul(witt_scalar(p, len, a), witt_scalar(p, len, b)), witt_scalar(p, len, a * b)));
                    CHECK(witt_equal(witt_neg(witt_scalar(p, len, a)), witt_scalar(p, len, -a)));
                }
        }
}

TEST_CASE("length-two sums and products follow the universal polynomials") {
    // S_1 = X_1 + Y_1 - sum_{0<i<p} C(p, i)/p X_0^i Y_0^{p-i},  P_1 = X_0^p Y_1 + X_1 Y_0^p mod p.
    std::mt19937_64 rng(3);
    for (u64 p : {3u, 5u})
        for (int s = 0; s < 30; ++s) {
            WittVector x = random_witt(rng, p, 2), y = random_witt(rng, p, 2);
            const PerfLaurent &x0 = x.comps[0], &x1 = x.comps[1], &y0 = y.comps[0], &y1 = y.comps[1];
            PerfLaurent s1 = perf_add(x1, y1);
            u64 binom = 1;
            for (u64 i = 1; i < p; ++i) {
                binom = binom * (p - i + 1) / i;
                PerfLaurent term = perf_mul(perf_pow(x0, static_cast<i64>(i), 1 << 20), perf_pow(y0, static_cast<i64>(p - i), 1 << 20));
                s1 = perf_sub(s1, perf_scale(term, (binom / p) % p));
            }
            WittVector sum = witt_add(x, y);
            CHECK(perf_equal(sum.comps[0], perf_add(x0, y0)));
            CHECK(perf_equal(sum.comps[1], s1));
            WittVector prod = witt_mul(x, y);
            PerfLaurent p1 = perf_add(perf_mul(perf_frobenius(x0), y1), perf_mul(x1, perf_frobenius(y0)));
            CHECK(perf_equal(prod.comps[0], perf_mul(x0, y0)));
            CHECK(perf_equal(prod.comps[1], p1));
        }
}

TEST_CASE("ring axioms on random Witt vectors") {
    std::mt19937_64 rng(5);
    for (int s = 0; s < 60; ++s) {
        const u64 p = s % 2 ? 3 : 5;
        const int len = 1 + s % 4;
        WittVector x = random_witt(rng, p, len), y = random_witt(rng, p, len), z = random_witt(rng, p, len);
        CHECK(witt_equal(witt_add(x, y), witt_add(y, x)));
        CHECK(witt_equal(witt_add(witt_add(x, y), z), witt_add(x, witt_add(y, z))));
        CHECK(witt_equal(witt_mul(witt_mul(x, y), z), witt_mul(x, witt_mul(y, z))));
        CHECK(witt_equal(witt_mul(x, witt_add(y, z)), witt_add(witt_mul(x, y), witt_mul(x, z))));
        CHECK(witt_equal(witt_add(x, witt_neg(x)), witt_zero(p, len)));
        CHECK(witt_equal(witt_mul(x, witt_one(p, len)), x));
    }
}

TEST_CASE("Teichmuller lifts are multiplicative") {
    std::mt19937_64 rng(9);
    for (int s = 0; s < 20; ++s) {
        PerfLaurent a = random_perf(rng, 3, 1, 3), b = random_perf(rng, 3, 0, 3);
        CHECK(witt_equal(witt_mul(teichmuller(a, 3), teichmuller(b, 3)), teichmuller(perf_mul(a, b), 3)));
    }
}

TEST_CASE("FV = p and VF = p") {
    std::mt19937_64 rng(21);
    for (int s = 0; s < 20; ++s) {
        const u64 p = s % 2 ? 3 : 5;
        WittVector x = random_witt(rng, p, 3);
        WittVector pw = witt_mul(witt_scalar(p, 3, static_cast<i64>(p)), x);
        CHECK(witt_equal(witt_frobenius(verschiebung(x)), pw));
        CHECK(witt_equal(verschiebung(witt_frobenius(x)), pw));
    }
}

TEST_CASE("perfect Laurent ring") {
    const u64 p = 3;
    PerfLaurent t = PerfLaurent::monomial(p, 1, 0);
    CHECK(tilt_valuation(t) == Rational(3, 2));
    CHECK(tilt_valuation(perf_root(t)) == Rational(1, 2));
    PerfLaurent s = perf_add(t, PerfLaurent::monomial(p, 2, 1, 2));
    CHECK(perf_equal(perf_frobenius(perf_root(s)), s));
    PerfLaurent u = one_plus_t(p);
    PerfLaurent inv = perf_invert(u, 20);
    PerfLaurent prod = perf_mul(u, inv);
    CHECK(prod.coeff(0, 0) == 1);
    for (i64 k = 1; k < 20; ++k) CHECK(prod.coeff(k, 0) == 0);
    // (1 + t)^p = 1 + t^p in characteristic p.
    CHECK(perf_equal(perf_pow(u, 3, 100), perf_add(PerfLaurent::monomial(p, 0, 0), PerfLaurent::monomial(p, 3, 0))));
    CHECK(perf_equal(perf_gamma(u, 4, 40), perf_pow(u, 4, 40)));
}

TEST_CASE("Gauss norm follows max_n p^{-n} |xbar_n|^r") {
    std::mt19937_64 rng(31);
    for (int s = 0; s < 50; ++s) {
        const u64 p = 3;
        WittVector x = random_witt(rng, p, 3);
        Rational r(1 + static_cast<i64>(rng() % 3), 1 + static_cast<i64>(rng() % 2));
        bool any = false;
        Rational best;
        i64 pn = 1;
        for (int n = 0; n < 3; ++n, pn *= 3) {
            const PerfLaurent& a = x.comps[static_cast<std::size_t>(n)];
            if (a.is_zero()) continue;
            // v(xbar_n) = v(x_n) / p^n, with v(tbar) = p / (p - 1).
            Rational v = a.lowest() * Rational(3, 2) * Rational(1, pn);
            Rational e = Rational(n) + r * v;
            if (!any || e < best) best = e;
            any = true;
        }
        NormValue nv = witt_gauss_norm(x, r);
        CHECK(nv.zero == !any);
        if (any) CHECK(nv.exponent == best);
    }
    WittVector y = witt_add(teichmuller(PerfLaurent::monomial(3, 1, 0), 3), witt_scalar(3, 3, 3));
    CHECK(witt_gauss_norm(y, Rational(1)).exponent == Rational(1));
}

TEST_CASE("theta is a ring map and kills the normalized xi") {
    const u64 p = 3;
    ThetaParams P;
    P.m = 2;
    P.N = 7;
    P.G = 4;
    const int len = 3;
    std::mt19937_64 rng(41);
    for (int s = 0; s < 3; ++s) {
        WittVector x = random_witt(rng, p, len), y = random_witt(rng, p, len);
        CycloLevel tx = theta_map(x, P), ty = theta_map(y, P);
        CHECK(cyclo_sub(theta_map(witt_add(x, y), P), cyclo_add(tx, ty)).valuation() >= P.N - P.G);
        CHECK(cyclo_sub(theta_map(witt_mul(x, y), P), cyclo_mul(tx, ty)).valuation() >= P.N - P.G);
    }
    WittVector eps = teichmuller(one_plus_t(p), len);
    CycloLevel te = theta_map(eps, P);
    CHECK(cyclo_sub(te, CycloLevel::root_of_unity(p, P.N, te.M, P.m)).valuation() >= P.N - P.G);
    CHECK(theta_map(xi_element(p, len, P.m - 1), P).valuation() >= P.N - P.G);
    CHECK(theta_map(xi_element(p, len, -1), P).valuation() == 0);
}

TEST_CASE("phi-eigen element") {
    PhiEigenResult r = phi_eigen_element(PerfLaurent::monomial(3, 1, 0), 3, Rational(1));
    CHECK(r.below_bound);
    CHECK(r.bound_exponent < r.defect_exponent);
    CHECK(r.element.terms.size() == 7);
}

TEST_CASE("embed_pi is phi- and gamma-equivariant") {
    const u64 p = 3;
    const int N = 12, len = 3;
    for (int k : {1, 2, -1}) {
        TruncatedLaurent f(p, N, -1, 30, false);
        f.set(k, PAdic::one(p, N));
        WittVector ef = embed_pi(f, len, 16);
        CHECK(witt_equal(embed_pi(frobenius_series(f), len, 16), witt_frobenius(ef)));
        CHECK(witt_equal(embed_pi(gamma_series(f, GammaElement::generator(p, N)), len, 16), witt_gamma(ef, 4, 16)));
    }
    WittVector e1 = embed_pi(TruncatedLaurent::monomial(p, N, 1, 1), len, 16);
    WittVector ref = witt_sub(teichmuller(one_plus_t(p), len), witt_one(p, len));
    CHECK(witt_equal(e1, ref));
}

TEST_CASE("lengths above four are rejected") {
    CHECK_THROWS(witt_zero(3, 5));
}
