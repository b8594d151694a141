#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "padicjac/errors.hpp"

namespace padicjac {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigInt pow_int(const BigInt& base, long e);
BigInt mod_inverse(const BigInt& a, const BigInt& m);

// cpp_rational construction with a sign-normalized denominator (this boost
// release rejects negative denominators for unbounded integer backends).
inline BigRat make_rat(BigInt num, BigInt den) {
    if (den == 0) fail("DivisionByZeroToPrecision", "rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return BigRat(num, den);
}

// p-adic valuation of an exact integer / rational; precondition: nonzero.
long vp(const BigInt& n, long p);
long vp(const BigRat& r, long p);

// Element of Q_p with tracked relative precision.
//
// A nonzero value is p^v * u with u a unit known modulo p^N (N >= 1).
// Zero-to-precision values carry only an absolute precision A: the value is
// known to be divisible by p^A. Exact zero has A = kExactZeroAbs.
class Padic {
public:
    static constexpr long kExactZeroAbs = 1L << 40;

    Padic() : prime_(0) {}

    static Padic zero(long prime, long abs_prec = kExactZeroAbs);
    static Padic make(long prime, long v, BigInt unit, long rel_prec);
    static Padic from_integer(long prime, const BigInt& n, long rel_prec);
    static Padic from_rational(long prime, const BigInt& num, const BigInt& den, long rel_prec);
    static Padic from_rational(long prime, const BigRat& r, long rel_prec);
    static Padic one(long prime, long rel_prec) { return from_integer(prime, 1, rel_prec); }

    long prime() const { return prime_; }
    bool is_zero() const { return is_zero_; }

    // Valuation of a nonzero-to-precision value; throws on zero.
    long valuation() const;
    // Relative precision of a nonzero value (digits of the unit).
    long precision() const;
    // Absolute precision: v + N, or A for zero.
    long abs_precision() const;
    const BigInt& unit() const;

    Padic operator+(const Padic& o) const;
    Padic operator-(const Padic& o) const;
    Padic operator-() const;
    Padic operator*(const Padic& o) const;
    Padic operator/(const Padic& o) const;
    Padic inv() const;
    Padic pow(long e) const;

    // Square root via Hensel lifting; p odd, valuation even, unit a QR mod p.
    // Of the two roots, returns the one whose unit mod p is the smaller
    // representative in [1, p-1].
    Padic sqrt() const;

    // Equal to precision: valuations agree and units agree mod p^min(N1,N2).
    bool eq(const Padic& o) const;

    // Truncate the unit to at most n relative digits.
    Padic truncated(long n) const;

    // Number of relative digits on which *this and o agree
    // (v-agreement required; capped by both precisions).
    long agreement_digits(const Padic& o) const;

    std::string unit_decimal() const;
    std::string to_string() const; // debug form, e.g. "5^2 * 7 (mod 5^24)"

    BigRat to_rational() const; // exact value of the stored representative

private:
    void check_same_prime(const Padic& o) const;

    long prime_ = 0;
    bool is_zero_ = true;
    long v_ = 0;        // valuation (nonzero values)
    BigInt unit_ = 0;   // in [1, p^N), coprime to p
    long rel_prec_ = 0; // N for nonzero; absolute precision A for zero
};

} // namespace padicjac
