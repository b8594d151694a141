#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padicjac/padic.hpp"

namespace padicjac {

// Point of P^1(Q_p). Finite points store their affine value z; the point at
// infinity is a tag. Canonical homogeneous coordinates follow the rule
// "the coordinate of smaller valuation is 1, ties normalize x1":
// v(z) >= 0 gives [z : 1], v(z) < 0 gives [1 : 1/z], infinity is [1 : 0].
class ProjPoint {
public:
    ProjPoint() = default;

    static ProjPoint finite(Padic z, long prec = -1) {
        long n = prec > 0 ? prec : (z.is_zero() ? 24 : z.precision());
        return ProjPoint(std::move(z), false, n);
    }
    static ProjPoint infinity(long prime, long prec);
    static ProjPoint from_rational(long prime, const BigRat& r, long prec);

    bool is_infinity() const { return inf_; }
    // Affine value; precondition: finite.
    const Padic& value() const;
    long prime() const { return prime_; }
    long prec() const { return prec_; }

    // Canonical homogeneous pair [x0 : x1].
    std::pair<Padic, Padic> coords() const;

    bool eq(const ProjPoint& o) const;

    // Deterministic total order used for leaf ordering and dedup only.
    std::string sort_key() const;

    std::string to_string() const;

private:
    ProjPoint(Padic z, bool inf, long prec)
        : prime_(z.prime()), prec_(prec), inf_(inf), z_(std::move(z)) {}

    long prime_ = 0;
    long prec_ = 0;
    bool inf_ = false;
    Padic z_;
};

// Element of PGL_2(Q_p) with exact integer entries (projective scaling of a
// rational matrix). Determinant is exact.
class Moebius {
public:
    Moebius() = default;
    Moebius(long prime, long prec, BigInt a, BigInt b, BigInt c, BigInt d);
    static Moebius identity(long prime, long prec);
    static Moebius from_rationals(long prime, long prec, const std::array<BigRat, 4>& abcd);

    long prime() const { return prime_; }
    long prec() const { return prec_; }
    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }
    const BigInt& c() const { return c_; }
    const BigInt& d() const { return d_; }
    BigInt det() const { return a_ * d_ - b_ * c_; }
    BigInt trace() const { return a_ + d_; }

    Moebius operator*(const Moebius& o) const;
    Moebius inverse() const;       // projective inverse (adjugate)
    Moebius contragredient() const;

    ProjPoint act(const ProjPoint& x) const;
    BigRat act_rational(const BigRat& z) const; // precondition: z not the pole
    bool is_identity() const;
    bool proportional_to(const Moebius& o) const;

    std::string to_string() const;

private:
    void reduce();

    long prime_ = 0;
    long prec_ = 0;
    BigInt a_ = 1, b_ = 0, c_ = 0, d_ = 1;
};

ProjPoint moebius_act(const Moebius& g, const ProjPoint& x);

// The star involution [a:b] -> [-b:a] between P^1 and its dual.
ProjPoint dual_star(const ProjPoint& x);

// Four point cross ratio (a1-z1)(a2-z2) / ((a1-z2)(a2-z1)); factors
// containing an infinite point are dropped in pairs.
// Preconditions: a1 != a2 and z1 != z2 to precision.
Padic cross_ratio(const ProjPoint& a1, const ProjPoint& z1, const ProjPoint& a2,
                  const ProjPoint& z2);

} // namespace padicjac
