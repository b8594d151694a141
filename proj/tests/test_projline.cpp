#include <doctest.h>

#include <random>

#include "padicjac/projline.hpp"

using namespace padicjac;

namespace {

constexpr long kP = 5;
constexpr long kN = 24;

ProjPoint pt(long num, long den = 1) { return ProjPoint::from_rational(kP, BigRat(num, den), kN); }
ProjPoint inf() { return ProjPoint::infinity(kP, kN); }

Moebius rnd_moebius(std::mt19937& rng) {
    std::uniform_int_distribution<long> d(-9, 9);
    while (true) {
        long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        if (a * e - b * c != 0) return Moebius(kP, kN, a, b, c, e);
    }
}

} // namespace

TEST_CASE("moebius action basics") {
    Moebius diag(kP, kN, 5, 0, 0, 1);
    CHECK(diag.act(pt(1)).eq(pt(5)));
    Moebius id = Moebius::identity(kP, kN);
    CHECK(id.act(pt(7)).eq(pt(7)));
    CHECK(id.act(inf()).is_infinity());
    Moebius swap(kP, kN, 0, 1, 1, 0);
    CHECK(swap.act(inf()).eq(pt(0)));
    CHECK(swap.act(pt(0)).is_infinity());
}

TEST_CASE("dual star involution") {
    CHECK(dual_star(inf()).eq(pt(0)));
    CHECK(dual_star(pt(0)).is_infinity());
    // i*(z)* = i(z): the star of [1:-z] is [z:1]
    ProjPoint z = pt(3, 7);
    ProjPoint starred = dual_star(ProjPoint::finite(-z.value().inv()));
    CHECK(starred.eq(z));
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int t = 0; t < 30; ++t) {
        long n = d(rng);
        ProjPoint x = n == 0 ? inf() : pt(n, 2);
        CHECK(dual_star(dual_star(x)).eq(x));
    }
}

TEST_CASE("star equivariance under the contragredient action") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int t = 0; t < 40; ++t) {
        Moebius g = rnd_moebius(rng);
        long n = d(rng);
        ProjPoint x = (t % 7 == 0) ? inf() : pt(n, 3);
        ProjPoint lhs = dual_star(g.act(x));
        ProjPoint rhs = g.contragredient().act(dual_star(x));
        CHECK(lhs.eq(rhs));
    }
}

TEST_CASE("group action composes") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int t = 0; t < 40; ++t) {
        Moebius g = rnd_moebius(rng), h = rnd_moebius(rng);
        ProjPoint x = (t % 5 == 0) ? inf() : pt(d(rng), 2);
        CHECK((g * h).act(x).eq(g.act(h.act(x))));
    }
}

TEST_CASE("cross ratio values") {
    // cr(0, 1, inf, 5) = (0-1)/(0-5) = 1/5
    Padic c = cross_ratio(pt(0), pt(1), inf(), pt(5));
    CHECK(c.valuation() == -1);
    CHECK(c.eq(Padic::from_rational(kP, BigRat(1, 5), kN)));
    // coincident first pair gives zero
    Padic z = cross_ratio(pt(2), pt(2), inf(), pt(3));
    CHECK(z.is_zero());
}

TEST_CASE("cross ratio cocycle") {
    // cr(0,1,inf,2) cr(0,2,inf,3) = cr(0,1,inf,3)
    Padic a = cross_ratio(pt(0), pt(1), inf(), pt(2));
    Padic b = cross_ratio(pt(0), pt(2), inf(), pt(3));
    Padic c = cross_ratio(pt(0), pt(1), inf(), pt(3));
    CHECK((a * b).eq(c));
}

TEST_CASE("cross ratio is PGL2 invariant") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<long> d(-12, 12);
    int done = 0;
    while (done < 40) {
        long a1 = d(rng), z1 = d(rng), a2 = d(rng), z2 = d(rng);
        if (a1 == a2 || z1 == z2 || a1 == z1 || a1 == z2 || a2 == z1 || a2 == z2) continue;
        Moebius g = rnd_moebius(rng);
        Padic before = cross_ratio(pt(a1), pt(z1), pt(a2), pt(z2));
        Padic after = cross_ratio(g.act(pt(a1)), g.act(pt(z1)), g.act(pt(a2)), g.act(pt(z2)));
        CHECK(before.agreement_digits(after) >= 18);
        ++done;
    }
}

TEST_CASE("degenerate cross ratios are rejected") {
    CHECK_THROWS_AS(cross_ratio(pt(1), pt(2), pt(1), pt(3)), math_error);
}

TEST_CASE("cross ratio with shared points") {
    // a1 = z1 (even at infinity) gives exact zero; a1 = z2 is infinite
    CHECK(cross_ratio(pt(2), pt(2), inf(), pt(3)).is_zero());
    CHECK(cross_ratio(inf(), inf(), pt(1), pt(3)).is_zero());
    CHECK_THROWS_WITH_AS(cross_ratio(inf(), pt(1), pt(2), inf()),
                         doctest::Contains("infinite"), math_error);
    CHECK_THROWS_WITH_AS(cross_ratio(pt(5), pt(1), pt(2), pt(5)),
                         doctest::Contains("infinite"), math_error);
}
