#include <doctest.h>

#include "padicjac/jacobian.hpp"

using namespace padicjac;

namespace {

constexpr long kN = 32;

ProjPoint pt(long p, long num, long den = 1) {
    return ProjPoint::from_rational(p, BigRat(num, den), kN);
}

Moebius conj_diag(long p, long q, const Moebius& C) {
    return C * Moebius(p, kN, q, 0, 0, 1) * C.inverse();
}

} // namespace

TEST_CASE("dumbbell group: disjoint axes joined by a bridge") {
    // a has axis A_{0,inf}; b = N a N^-1 has fixed points 1 and 6, whose
    // axis attaches to the a-axis through a length-1 bridge. The quotient is
    // a dumbbell: two length-2 loops and a bridge edge.
    long p = 5;
    Moebius a(p, kN, 25, 0, 0, 1);
    Moebius N(p, kN, 6, 1, 1, 1);
    SchottkyGroup G(p, kN, {a, conj_diag(p, 25, N)});
    FixedData fb = G.fixed(1);
    CHECK(fb.attractive.eq(pt(p, 1)));
    CHECK(fb.repulsive.eq(pt(p, 6)));

    const QuotientGraphData& Q = G.quotient(3);
    CHECK(Q.graph.betti() == 2);
    CHECK(Q.graph.num_vertices() == 2);
    CHECK(Q.graph.num_directed_edges() == 6); // two loops and one bridge
    // loop lengths 2, bridge length 1
    std::vector<long> lens;
    int loops = 0, bridges = 0;
    for (size_t e = 0; e < Q.graph.num_directed_edges(); e += 2) {
        if (Q.graph.src(static_cast<int>(e)) == Q.graph.dst(static_cast<int>(e))) {
            ++loops;
            CHECK(Q.graph.length(static_cast<int>(e)) == 2);
        } else {
            ++bridges;
            CHECK(Q.graph.length(static_cast<int>(e)) == 1);
        }
    }
    CHECK(loops == 2);
    CHECK(bridges == 1);

    auto M = G.gram_matrix();
    CHECK(M == std::vector<std::vector<long>>{{2, 0}, {0, 2}});

    // harmonic measures vanish on the bridge direction: mu_g1 evaluated on
    // tree edges toward b's territory is zero beyond the branch vertex
    ThetaOptions opt;
    opt.trunc_cap = 10;
    opt.requested_digits = 10;
    PeriodMatrix P = period_matrix(G, opt);
    CHECK(P.gram == M);
    CHECK(P.digits >= 10);

    // Abel-Jacobi well-definedness
    ProjPoint z0 = pt(p, 3);
    ProjPoint z = pt(p, 8);
    TorusPoint u = abel_jacobi(G, G.generator(1).act(z), z0, opt);
    TorusPoint v = abel_jacobi(G, z, z0, opt);
    CHECK(equal_mod_lattice(P, u, v, 8));
}

TEST_CASE("genus 3 wedge of three loops") {
    long p = 5;
    Moebius a(p, kN, 25, 0, 0, 1);
    Moebius M(p, kN, 1, 1, 1, -1);
    Moebius C(p, kN, 3, 2, 1, 1);
    SchottkyGroup G(p, kN, {a, conj_diag(p, 25, M), conj_diag(p, 25, C)});
    CHECK(G.genus() == 3);
    CHECK(G.fixed(2).attractive.eq(pt(p, 2)));
    CHECK(G.fixed(2).repulsive.eq(pt(p, 3)));

    const QuotientGraphData& Q = G.quotient(2);
    CHECK(Q.graph.betti() == 3);
    auto M3 = G.gram_matrix();
    std::vector<std::vector<long>> expect{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}};
    CHECK(M3 == expect);

    ThetaOptions opt;
    opt.trunc_cap = 8;
    opt.requested_digits = 6;
    PeriodMatrix P = period_matrix(G, opt);
    CHECK(P.gram == expect);
}

TEST_CASE("tate over Q13") {
    SchottkyGroup G(13, kN, {Moebius(13, kN, 169, 0, 0, 1)});
    const QuotientGraphData& Q = G.quotient(1);
    CHECK(Q.graph.betti() == 1);
    CHECK(Q.graph.length(0) == 2);
    ThetaOptions opt;
    opt.trunc_cap = 14;
    opt.requested_digits = 14;
    Certified q = period_entry(G, 0, 0, opt);
    CHECK(q.value.agreement_digits(Padic::from_integer(13, 169, kN)) >= 14);
}
