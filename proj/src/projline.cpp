#include "padicjac/projline.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace padicjac {

ProjPoint ProjPoint::infinity(long prime, long prec) {
    return ProjPoint(Padic::zero(prime), true, prec);
}

ProjPoint ProjPoint::from_rational(long prime, const BigRat& r, long prec) {
    return ProjPoint(Padic::from_rational(prime, r, prec), false, prec);
}

const Padic& ProjPoint::value() const {
    if (inf_) fail("DegenerateConfiguration", "affine value of the infinite point");
    return z_;
}

std::pair<Padic, Padic> ProjPoint::coords() const {
    long n = prec_ > 0 ? prec_ : 1;
    Padic one = Padic::one(prime_, n);
    if (inf_) return {one, Padic::zero(prime_)};
    if (z_.is_zero()) return {Padic::zero(prime_), one};
    if (z_.valuation() >= 0) return {z_, one};
    return {one, z_.inv()};
}

bool ProjPoint::eq(const ProjPoint& o) const {
    if (prime_ != o.prime_) return false;
    if (inf_ || o.inf_) return inf_ && o.inf_;
    return z_.eq(o.z_);
}

std::string ProjPoint::sort_key() const {
    if (inf_) return "~inf";
    if (z_.is_zero()) return "0";
    std::string v = std::to_string(z_.valuation());
    std::string u = z_.unit().str();
    // zero-pad for a stable lexicographic order
    return std::string(v.size(), '0') + v + ":" +
           std::string(48 - std::min<size_t>(48, u.size()), '0') + u;
}

std::string ProjPoint::to_string() const {
    if (inf_) return "inf";
    return z_.to_string();
}

Moebius::Moebius(long prime, long prec, BigInt a, BigInt b, BigInt c, BigInt d)
    : prime_(prime), prec_(prec), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (det() == 0) fail("SingularGenerator", "matrix has zero determinant");
    reduce();
}

void Moebius::reduce() {
    BigInt g = gcd(gcd(abs(a_), abs(b_)), gcd(abs(c_), abs(d_)));
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        c_ /= g;
        d_ /= g;
    }
    // fix projective sign for a deterministic representative
    BigInt lead = a_ != 0 ? a_ : (b_ != 0 ? b_ : c_);
    if (lead < 0) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
        d_ = -d_;
    }
}

Moebius Moebius::identity(long prime, long prec) { return Moebius(prime, prec, 1, 0, 0, 1); }

Moebius Moebius::from_rationals(long prime, long prec, const std::array<BigRat, 4>& abcd) {
    BigInt l = 1;
    for (const auto& r : abcd) l = lcm(l, denominator(r));
    std::array<BigInt, 4> e;
    for (int i = 0; i < 4; ++i) e[i] = numerator(abcd[i]) * (l / denominator(abcd[i]));
    return Moebius(prime, prec, e[0], e[1], e[2], e[3]);
}

Moebius Moebius::operator*(const Moebius& o) const {
    return Moebius(prime_, prec_, a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                   c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
}

Moebius Moebius::inverse() const { return Moebius(prime_, prec_, d_, -b_, -c_, a_); }

Moebius Moebius::contragredient() const { return Moebius(prime_, prec_, d_, -c_, -b_, a_); }

ProjPoint Moebius::act(const ProjPoint& x) const {
    long n = prec_ > 0 ? prec_ : 24;
    if (x.is_infinity()) {
        if (c_ == 0) return ProjPoint::infinity(prime_, n);
        return ProjPoint::from_rational(prime_, make_rat(a_, c_), n);
    }
    const Padic& z = x.value();
    Padic az = Padic::from_integer(prime_, a_, n) * z + Padic::from_integer(prime_, b_, n);
    Padic cz = Padic::from_integer(prime_, c_, n) * z + Padic::from_integer(prime_, d_, n);
    if (cz.is_zero()) {
        if (az.is_zero()) fail("PrecisionExhausted", "moebius image indeterminate to precision");
        return ProjPoint::infinity(prime_, n);
    }
    return ProjPoint::finite(az / cz, n);
}

BigRat Moebius::act_rational(const BigRat& z) const {
    BigRat den = BigRat(c_) * z + BigRat(d_);
    if (den == 0) fail("DegenerateConfiguration", "rational moebius image hits the pole");
    return (BigRat(a_) * z + BigRat(b_)) / den;
}

bool Moebius::is_identity() const { return b_ == 0 && c_ == 0 && a_ == d_; }

bool Moebius::proportional_to(const Moebius& o) const {
    return a_ * o.b_ == b_ * o.a_ && a_ * o.c_ == c_ * o.a_ && a_ * o.d_ == d_ * o.a_ &&
           b_ * o.c_ == c_ * o.b_ && b_ * o.d_ == d_ * o.b_ && c_ * o.d_ == d_ * o.c_;
}

std::string Moebius::to_string() const {
    return "[[" + a_.str() + "," + b_.str() + "],[" + c_.str() + "," + d_.str() + "]]";
}

ProjPoint moebius_act(const Moebius& g, const ProjPoint& x) { return g.act(x); }

ProjPoint dual_star(const ProjPoint& x) {
    // [x0 : x1] -> [-x1 : x0]; affine z -> -1/z
    if (x.is_infinity()) return ProjPoint::finite(Padic::zero(x.prime()));
    if (x.value().is_zero()) return ProjPoint::infinity(x.prime(), x.prec());
    return ProjPoint::finite(-x.value().inv());
}

namespace {

// One cross-ratio factor (x - y); infinite points contribute 1.
Padic cr_factor(const ProjPoint& x, const ProjPoint& y) {
    if (x.is_infinity() || y.is_infinity())
        return Padic::one(x.prime(), std::max<long>(x.prec(), y.prec()));
    return x.value() - y.value();
}

} // namespace

Padic cross_ratio(const ProjPoint& a1, const ProjPoint& z1, const ProjPoint& a2,
                  const ProjPoint& z2) {
    if (a1.eq(a2)) fail("DegenerateConfiguration", "cross ratio requires a1 != a2");
    if (z1.eq(z2)) fail("DegenerateConfiguration", "cross ratio requires z1 != z2");
    // shared points give 0 or an infinite value; the infinity cannot be
    // represented, the zero is exact
    if (a1.eq(z2) || a2.eq(z1))
        fail("DegenerateConfiguration", "cross ratio is infinite (shared point)");
    if (a1.eq(z1) || a2.eq(z2)) return Padic::zero(a1.prime());
    Padic num = cr_factor(a1, z1) * cr_factor(a2, z2);
    Padic den = cr_factor(a1, z2) * cr_factor(a2, z1);
    if (den.is_zero()) {
        if (num.is_zero())
            fail("PrecisionExhausted", "cross ratio indeterminate to precision");
        fail("DegenerateConfiguration", "cross ratio denominator vanishes to precision");
    }
    return num / den;
}

} // namespace padicjac
