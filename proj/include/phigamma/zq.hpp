#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace phigamma {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Thrown when an operation's stated precondition does not hold.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact p^e; throws if the result does not fit below 2^62.
u64 ipow(u64 b, int e);

/// p-adic valuation of an integer (returns 1 << 30 for zero).
int vp(i64 x, u64 p);

bool is_prime(u64 n);

/// Smallest primitive root mod p.
u64 primitive_root(u64 p);

/**
 * Residue ring Z/p^N.  All residues are kept in [0, q).
 */
struct Zq {
    u64 p = 3;
    int N = 1;
    u64 q = 3;

    Zq() = default;
    Zq(u64 p_, int N_);

    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= q ? s - q : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + q - b; }
    u64 neg(u64 a) const { return a ? q - a : 0; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % q); }
    u64 from(i64 x) const;
    u64 pow(u64 a, u64 e) const;
    u64 inv(u64 a) const;
    int val(u64 a) const;
    u64 ppow(int k) const;
    bool operator==(const Zq& o) const { return p == o.p && N == o.N; }
};

/// Signed representative in (-q/2, q/2].
i64 centered(const Zq& R, u64 a);

}  // namespace phigamma
