#pragma once

#include <string>

#include "phigamma/zq.hpp"

namespace phigamma {

/// v_p of a scalar; `infinite` doubles as the indistinguishable-from-zero flag.
struct Valuation {
    bool infinite = true;
    int value = 0;
    bool operator==(const Valuation&) const = default;
};

/**
 * Element mantissa * p^{-e} of Q_p, known modulo p^{N-e}.
 *
 * The mantissa is a residue mod p^N.  Results of arithmetic carry the smallest
 * effective precision N - e among the operands; once e reaches N the value is
 * exhausted and compares equal to zero.
 */
class PAdic {
public:
    PAdic() = default;
    PAdic(u64 p, int N, u64 mantissa, int denom_exp = 0);

    static PAdic zero(u64 p, int N) { return PAdic(p, N, 0, 0); }
    static PAdic one(u64 p, int N) { return PAdic(p, N, 1, 0); }
    static PAdic from_int(i64 x, u64 p, int N);
    static PAdic exhausted_zero(u64 p, int N);

    u64 p() const { return p_; }
    int N() const { return N_; }
    u64 mantissa() const { return m_; }
    int denom_exp() const { return e_; }
    bool exhausted() const { return exh_; }
    int effective_precision() const { return exh_ ? 0 : N_ - e_; }

    /// Zero at the available precision.
    bool is_zero() const { return exh_ || m_ == 0; }
    bool is_integral() const;
    bool is_unit() const;

    PAdic operator+(const PAdic& o) const;
    PAdic operator-(const PAdic& o) const;
    PAdic operator-() const;
    PAdic operator*(const PAdic& o) const;
    PAdic& operator+=(const PAdic& o) { return *this = *this + o; }
    PAdic& operator-=(const PAdic& o) { return *this = *this - o; }
    PAdic& operator*=(const PAdic& o) { return *this = *this * o; }

    /// Multiplicative inverse; throws on values indistinguishable from zero.
    PAdic inverse() const;
    PAdic operator/(const PAdic& o) const { return *this * o.inverse(); }
    /// Multiply by p^k (k may be negative).
    PAdic shift(int k) const;

    /// Equality at the smaller of the two effective precisions.
    bool operator==(const PAdic& o) const { return (*this - o).is_zero(); }

    /// Integer representative of an integral value (mantissa mod p^{N-e} scaled down).
    u64 integral_residue() const;

    std::string str() const;

private:
    u64 p_ = 3;
    int N_ = 1;
    u64 m_ = 0;
    int e_ = 0;
    bool exh_ = false;
};

PAdic padic_from_rational(i64 num, i64 den, u64 p, int N);

Valuation valuation(const PAdic& x);

PAdic teichmuller_lift(u64 a, u64 p, int N);

/**
 * Binomial coefficient C(c, n) with the p-part of n! removed exactly.
 * With `exact_representative` the mantissa of c is taken as an exact integer,
 * which supplies the guard digits; otherwise the result's effective precision
 * drops by the largest p-power among the factors c - i.
 */
PAdic binomial_padic(const PAdic& c, int n, bool exact_representative = false);

}  // namespace phigamma
