#include <random>

#include "doctest.h"
#include "phigamma/padic.hpp"

using namespace phigamma;

namespace {

i64 mod_pow(i64 b, i64 e, i64 m) {
    i64 r = 1 % m;
    b %= m;
    if (b < 0) b += m;
    while (e) {
        if (e & 1) r = static_cast<i64>(static_cast<__int128>(r) * b % m);
        b = static_cast<i64>(static_cast<__int128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

i64 reduce(i64 x, i64 m) {
    x %= m;
    return x < 0 ? x + m : x;
}

}  // namespace

TEST_CASE("integer arithmetic matches machine arithmetic mod p^N") {
    std::mt19937_64 rng(7);
    for (u64 p : {3u, 5u, 7u}) {
        const int N = 10;
        const i64 q = static_cast<i64>(ipow(p, N));
        for (int s = 0; s < 200; ++s) {
            i64 a = static_cast<i64>(rng() % 2000000) - 1000000;
            i64 b = static_cast<i64>(rng() % 2000000) - 1000000;
            PAdic x = PAdic::from_int(a, p, N), y = PAdic::from_int(b, p, N);
            CHECK((x + y).integral_residue() == static_cast<u64>(reduce(a + b, q)));
            CHECK((x - y).integral_residue() == static_cast<u64>(reduce(a - b, q)));
            CHECK((x * y).integral_residue() == static_cast<u64>(reduce(static_cast<i64>(static_cast<__int128>(a) * b % q), q)));
        }
    }
}

TEST_CASE("inverse of units and rationals") {
    const u64 p = 5;
    const int N = 12;
    for (i64 a = 1; a < 60; ++a) {
        if (a % 5 == 0) continue;
        PAdic x = PAdic::from_int(a, p, N);
        CHECK(x * x.inverse() == PAdic::one(p, N));
    }
    PAdic h = padic_from_rational(1, 10, p, N);
    CHECK(h.denom_exp() == 1);
    CHECK(h * PAdic::from_int(10, p, N) == PAdic::one(p, N));
    CHECK(h.effective_precision() == N - 1);
}

TEST_CASE("valuation and shift") {
    const u64 p = 3;
    const int N = 8;
    CHECK(valuation(PAdic::from_int(18, p, N)).value == 2);
    CHECK(valuation(PAdic::zero(p, N)).infinite);
    Valuation v = valuation(padic_from_rational(2, 27, p, N));
    CHECK(!v.infinite);
    CHECK(v.value == -3);
    CHECK(PAdic::one(p, N).shift(3) == PAdic::from_int(27, p, N));
    CHECK(PAdic::from_int(27, p, N).shift(-3) == PAdic::one(p, N));
}

TEST_CASE("precision exhaustion compares as zero") {
    CHECK_THROWS(padic_from_rational(1, 81, 3, 4));
    PAdic x = PAdic::one(3, 4).shift(-4);
    CHECK(x.effective_precision() == 0);
    CHECK(x.is_zero());
    CHECK_THROWS(x.inverse());
}

TEST_CASE("Teichmuller lift is a (p-1)-th root of unity lifting a") {
    for (u64 p : {3u, 5u, 7u}) {
        const int N = 9;
        const i64 q = static_cast<i64>(ipow(p, N));
        for (u64 a = 1; a < p; ++a) {
            PAdic w = teichmuller_lift(a, p, N);
            i64 r = static_cast<i64>(w.integral_residue());
            CHECK(r % static_cast<i64>(p) == static_cast<i64>(a));
            CHECK(mod_pow(r, static_cast<i64>(p - 1), q) == 1);
        }
    }
}

TEST_CASE("binomial with exact representative matches the integer binomial") {
    const u64 p = 3;
    const int N = 10;
    const i64 q = static_cast<i64>(ipow(p, N));
    for (i64 c = 0; c < 20; ++c)
        for (int n = 0; n <= 6; ++n) {
            i64 b = 1;
            for (int i = 0; i < n; ++i) b = b * (c - i) / (i + 1);
            PAdic r = binomial_padic(PAdic::from_int(c, p, N), n, true);
            CHECK(r == PAdic::from_int(reduce(b, q), p, N));
        }
}
