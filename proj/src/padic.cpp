#include "padicjac/padic.hpp"

#include <algorithm>
#include <map>

namespace padicjac {

namespace {

BigInt pow_raw(const BigInt& base, long e) {
    BigInt r = 1, b = base;
    for (long k = e; k > 0; k >>= 1) {
        if (k & 1) r *= b;
        b *= b;
    }
    return r;
}

} // namespace

BigInt pow_int(const BigInt& base, long e) {
    // small prime powers dominate the arithmetic; memoize them
    if (base > 1 && base < 1000 && e >= 0 && e <= 4096) {
        thread_local std::map<std::pair<long, long>, BigInt> memo;
        auto key = std::make_pair(base.convert_to<long>(), e);
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, pow_raw(base, e)).first;
        return it->second;
    }
    return pow_raw(base, e);
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt old_r = a % m, r = m;
    if (old_r < 0) old_r += m;
    BigInt old_s = 1, s = 0;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) fail("NotInvertible", "modular inverse does not exist");
    old_s %= m;
    if (old_s < 0) old_s += m;
    return old_s;
}

long vp(const BigInt& n, long p) {
    if (n == 0) fail("InfiniteValuation", "vp(0)");
    BigInt m = abs(n);
    long v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

long vp(const BigRat& r, long p) {
    return vp(numerator(r), p) - vp(denominator(r), p);
}

Padic Padic::zero(long prime, long abs_prec) {
    Padic x;
    x.prime_ = prime;
    x.is_zero_ = true;
    x.rel_prec_ = abs_prec;
    return x;
}

Padic Padic::make(long prime, long v, BigInt unit, long rel_prec) {
    if (rel_prec < 1) return zero(prime, v + std::max<long>(rel_prec, 0));
    BigInt mod = pow_int(prime, rel_prec);
    unit %= mod;
    if (unit < 0) unit += mod;
    if (unit == 0) return zero(prime, v + rel_prec);
    // shift any p factor of the unit into the valuation
    long extra = vp(unit, prime);
    if (extra > 0) {
        if (extra >= rel_prec) return zero(prime, v + rel_prec);
        unit /= pow_int(prime, extra);
        v += extra;
        rel_prec -= extra;
        unit %= pow_int(prime, rel_prec);
    }
    Padic x;
    x.prime_ = prime;
    x.is_zero_ = false;
    x.v_ = v;
    x.unit_ = unit;
    x.rel_prec_ = rel_prec;
    return x;
}

Padic Padic::from_integer(long prime, const BigInt& n, long rel_prec) {
    if (n == 0) return zero(prime);
    long v = vp(n, prime);
    BigInt u = n / pow_int(prime, v);
    return make(prime, v, u, rel_prec);
}

Padic Padic::from_rational(long prime, const BigInt& num, const BigInt& den, long rel_prec) {
    if (den == 0) fail("DivisionByZeroToPrecision", "rational with zero denominator");
    if (num == 0) return zero(prime);
    long vn = vp(num, prime), vd = vp(den, prime);
    BigInt nu = num / pow_int(prime, vn);
    BigInt du = den / pow_int(prime, vd);
    BigInt mod = pow_int(prime, rel_prec);
    BigInt u = nu % mod;
    if (u < 0) u += mod;
    u = (u * mod_inverse(du, mod)) % mod;
    return make(prime, vn - vd, u, rel_prec);
}

Padic Padic::from_rational(long prime, const BigRat& r, long rel_prec) {
    return from_rational(prime, numerator(r), denominator(r), rel_prec);
}

long Padic::valuation() const {
    if (is_zero_) fail("InfiniteValuation", "valuation of zero-to-precision value");
    return v_;
}

long Padic::precision() const {
    if (is_zero_) fail("InfiniteValuation", "relative precision of zero value");
    return rel_prec_;
}

long Padic::abs_precision() const { return is_zero_ ? rel_prec_ : v_ + rel_prec_; }

const BigInt& Padic::unit() const {
    if (is_zero_) fail("InfiniteValuation", "unit of zero value");
    return unit_;
}

void Padic::check_same_prime(const Padic& o) const {
    if (prime_ != o.prime_) fail("PrimeMismatch", "operands over different primes");
}

Padic Padic::operator+(const Padic& o) const {
    check_same_prime(o);
    long abs = std::min(abs_precision(), o.abs_precision());
    if (is_zero_ && o.is_zero_) return zero(prime_, abs);
    if (is_zero_) {
        if (o.v_ >= abs) return zero(prime_, abs);
        return make(prime_, o.v_, o.unit_, abs - o.v_);
    }
    if (o.is_zero_) {
        if (v_ >= abs) return zero(prime_, abs);
        return make(prime_, v_, unit_, abs - v_);
    }
    long vmin = std::min(v_, o.v_);
    if (abs <= vmin) return zero(prime_, abs);
    BigInt mod = pow_int(prime_, abs - vmin);
    BigInt s = (unit_ * pow_int(prime_, v_ - vmin) + o.unit_ * pow_int(prime_, o.v_ - vmin)) % mod;
    return make(prime_, vmin, s, abs - vmin);
}

Padic Padic::operator-() const {
    if (is_zero_) return *this;
    return make(prime_, v_, pow_int(prime_, rel_prec_) - unit_, rel_prec_);
}

Padic Padic::operator-(const Padic& o) const { return *this + (-o); }

Padic Padic::operator*(const Padic& o) const {
    check_same_prime(o);
    if (is_zero_ || o.is_zero_) {
        long a = is_zero_ ? rel_prec_ : v_;
        long b = o.is_zero_ ? o.rel_prec_ : o.v_;
        return zero(prime_, std::min<long>(a + b, kExactZeroAbs));
    }
    long n = std::min(rel_prec_, o.rel_prec_);
    BigInt mod = pow_int(prime_, n);
    return make(prime_, v_ + o.v_, (unit_ * o.unit_) % mod, n);
}

Padic Padic::inv() const {
    if (is_zero_) fail("DivisionByZeroToPrecision", "inverting zero-to-precision value");
    return make(prime_, -v_, mod_inverse(unit_, pow_int(prime_, rel_prec_)), rel_prec_);
}

Padic Padic::operator/(const Padic& o) const { return *this * o.inv(); }

Padic Padic::pow(long e) const {
    if (e == 0) {
        long n = is_zero_ ? 1 : rel_prec_;
        return one(prime_, n);
    }
    Padic base = e > 0 ? *this : inv();
    long k = e > 0 ? e : -e;
    Padic r = base;
    --k;
    while (k > 0) {
        r = r * base;
        --k;
    }
    return r;
}

Padic Padic::sqrt() const {
    if (prime_ == 2) fail("EvenPrimeUnsupported", "p=2 square roots are not supported");
    if (is_zero_) fail("DivisionByZeroToPrecision", "sqrt of zero-to-precision value");
    if (v_ % 2 != 0) fail("NotASquare", "odd valuation");
    long p = prime_;
    BigInt u0 = unit_ % p;
    // Euler criterion
    BigInt pb = p;
    BigInt e = (pb - 1) / 2;
    BigInt t = powm(u0, e, pb);
    if (t != 1) fail("NotASquare", "unit is a quadratic nonresidue mod p");
    // root of u0 mod p (p is small)
    BigInt r = 0;
    for (BigInt c = 1; c < pb; ++c) {
        if ((c * c) % pb == u0) {
            r = c;
            break;
        }
    }
    if (r > pb - r) r = pb - r;
    // Newton lifting r <- (r^2 + u)/(2r); digits double each step
    long target = rel_prec_;
    long k = 1;
    while (k < target) {
        k = std::min(2 * k, target);
        BigInt mod = pow_int(p, k);
        BigInt num = (r * r % mod + unit_ % mod) % mod;
        r = num * mod_inverse((2 * r) % mod, mod) % mod;
    }
    Padic res = make(prime_, v_ / 2, r, target);
    // choose the root whose unit mod p is the smaller representative
    BigInt rm = res.unit_ % p;
    if (rm > p - rm) res = -res;
    return res;
}

bool Padic::eq(const Padic& o) const {
    if (prime_ != o.prime_) return false;
    if (is_zero_ || o.is_zero_) return is_zero_ && o.is_zero_;
    if (v_ != o.v_) return false;
    long n = std::min(rel_prec_, o.rel_prec_);
    BigInt mod = pow_int(prime_, n);
    return unit_ % mod == o.unit_ % mod;
}

Padic Padic::truncated(long n) const {
    if (is_zero_) return *this;
    if (n >= rel_prec_) return *this;
    return make(prime_, v_, unit_ % pow_int(prime_, n), n);
}

long Padic::agreement_digits(const Padic& o) const {
    if (prime_ != o.prime_) return 0;
    if (is_zero_ || o.is_zero_) {
        if (is_zero_ && o.is_zero_) return std::min(rel_prec_, o.rel_prec_);
        return 0;
    }
    if (v_ != o.v_) return 0;
    long n = std::min(rel_prec_, o.rel_prec_);
    BigInt d = unit_ - o.unit_;
    BigInt mod = pow_int(prime_, n);
    d %= mod;
    if (d < 0) d += mod;
    if (d == 0) return n;
    return std::min(n, vp(d, prime_));
}

std::string Padic::unit_decimal() const {
    if (is_zero_) return "0";
    return unit_.str();
}

std::string Padic::to_string() const {
    if (is_zero_) {
        if (rel_prec_ >= kExactZeroAbs) return "0";
        return "O(" + std::to_string(prime_) + "^" + std::to_string(rel_prec_) + ")";
    }
    std::string head;
    if (unit_ < 1000000000) {
        head = unit_.str();
    } else {
        BigInt u6 = unit_ % pow_int(prime_, 6);
        head = u6.str() + "+O(" + std::to_string(prime_) + "^6)";
    }
    if (v_ == 0) return head;
    return std::to_string(prime_) + "^" + std::to_string(v_) + "*" + head;
}

BigRat Padic::to_rational() const {
    if (is_zero_) return BigRat(0);
    BigRat u(unit_);
    if (v_ >= 0) return u * BigRat(pow_int(prime_, v_));
    return u / BigRat(pow_int(prime_, -v_));
}

} // namespace padicjac
