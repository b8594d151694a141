#include <doctest.h>

#include <random>
#include <set>

#include "padicjac/tree.hpp"

using namespace padicjac;

namespace {

constexpr long kP = 5;
constexpr long kN = 24;

ProjPoint pt(long num, long den = 1) { return ProjPoint::from_rational(kP, BigRat(num, den), kN); }
ProjPoint inf() { return ProjPoint::infinity(kP, kN); }
TreePoint tp(long center, long m) { return TreePoint::make(kP, BigRat(center), m); }

} // namespace

TEST_CASE("join of close points") {
    CHECK(join_points(pt(0), pt(5)).eq(tp(0, 1)));
    CHECK(join_points(pt(0), pt(1)).eq(tp(0, 0))); // Gauss point
    CHECK(join_points(pt(1), pt(6)).eq(tp(1, 1)));
    CHECK_THROWS_AS(join_points(pt(2), pt(2)), math_error);
}

TEST_CASE("median of three boundary points") {
    CHECK(median(pt(0), pt(1), inf()).eq(tp(0, 0)));
    CHECK(median(pt(0), pt(5), inf()).eq(tp(0, 1)));
    // all finite: the join of the closest pair, not the Gauss point
    TreePoint m = median(pt(0), pt(5), pt(1));
    CHECK(m.eq(tp(0, 1)));
    // distance-identity oracle: m lies on all three pairwise paths
    for (auto [a, b] : {std::pair{0L, 5L}, {0L, 1L}, {5L, 1L}}) {
        TreePoint pa = TreePoint::from_padic_center(pt(a).value(), 6);
        TreePoint pb = TreePoint::from_padic_center(pt(b).value(), 6);
        // walk from deep ball around a to deep ball around b
        CHECK(tree_distance(pa, m) + tree_distance(m, pb) == tree_distance(pa, pb));
    }
    CHECK_THROWS_AS(median(pt(0), pt(0), pt(1)), math_error);
}

TEST_CASE("tree distance") {
    CHECK(tree_distance(tp(0, 0), tp(0, 3)) == 3);
    CHECK(tree_distance(tp(0, 2), tp(0, 2)) == 0);
    CHECK(tree_distance(tp(0, 1), tp(1, 1)) == 2); // through the Gauss point
}

TEST_CASE("distance is PGL2 invariant and medians are equivariant") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<long> d(-12, 12);
    int done = 0;
    while (done < 40) {
        long x0 = d(rng), x1 = d(rng), y0 = d(rng), y1 = d(rng), x2 = d(rng);
        if (x0 == x1 || y0 == y1 || x2 == x0 || x2 == x1) continue;
        long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        if (a * e - b * c == 0) continue;
        Moebius g(kP, kN, a, b, c, e);
        TreePoint p1 = join_points(pt(x0), pt(x1));
        TreePoint p2 = join_points(pt(y0), pt(y1));
        CHECK(tree_distance(moebius_act_tree(g, p1), moebius_act_tree(g, p2)) ==
              tree_distance(p1, p2));
        // the median of three boundary points is equivariant
        TreePoint m = median(pt(x0), pt(x1), pt(x2));
        TreePoint gm = median(g.act(pt(x0)), g.act(pt(x1)), g.act(pt(x2)));
        CHECK(moebius_act_tree(g, m).eq(gm));
        ++done;
    }
}

TEST_CASE("retraction onto a two-point tree") {
    std::vector<ProjPoint> L{pt(0), inf()};
    Retraction r = retract(pt(3), L);
    CHECK(!r.is_leaf);
    CHECK(r.point.eq(tp(0, 0)));
    Retraction r2 = retract(pt(0), L);
    CHECK(r2.is_leaf);
    CHECK(r2.leaf_index == 0);
    Retraction r3 = retract(pt(26), L);
    CHECK(r3.point.eq(tp(1, 0))); // v(26) = 0: the Gauss point
    CHECK(r3.point.eq(tp(0, 0)));
    // diameter cap without infinity
    std::vector<ProjPoint> L2{pt(0), pt(5)};
    CHECK(retract(pt(1), L2).point.eq(tp(0, 1)));
    CHECK(retract(inf(), L2).point.eq(tp(0, 1)));
}

TEST_CASE("lemma extend: retraction through subsets") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<long> d(-20, 20);
    int done = 0;
    while (done < 30) {
        std::set<long> pts;
        while (pts.size() < 5) pts.insert(d(rng));
        std::vector<ProjPoint> L;
        for (long v : pts) L.push_back(pt(v));
        L.push_back(inf());
        std::vector<ProjPoint> Lsub{L[0], L[2], L[4]};
        long z = d(rng);
        if (pts.count(z)) continue;
        Retraction full = retract(pt(z), L);
        if (full.is_leaf) continue;
        TreePoint composed = retract_tree_point(full.point, Lsub);
        Retraction direct = retract(pt(z), Lsub);
        CHECK(!direct.is_leaf);
        CHECK(composed.eq(direct.point));
        ++done;
    }
}

TEST_CASE("retraction is equivariant") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<long> d(-12, 12);
    int done = 0;
    while (done < 30) {
        std::set<long> pts;
        while (pts.size() < 4) pts.insert(d(rng));
        long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        if (a * e - b * c == 0) continue;
        Moebius g(kP, kN, a, b, c, e);
        std::vector<ProjPoint> L, gL;
        for (long v : pts) {
            L.push_back(pt(v));
            gL.push_back(g.act(pt(v)));
        }
        long z = d(rng);
        if (pts.count(z)) continue;
        Retraction r = retract(pt(z), L);
        Retraction gr = retract(g.act(pt(z)), gL);
        if (r.is_leaf || gr.is_leaf) continue;
        CHECK(gr.point.eq(moebius_act_tree(g, r.point)));
        ++done;
    }
}

TEST_CASE("build_tree simple shapes") {
    FiniteTree t1 = build_tree(kP, {pt(0), pt(1), inf()});
    CHECK(t1.num_interior() == 1);
    CHECK(t1.num_directed_edges() == 6);

    FiniteTree t2 = build_tree(kP, {pt(0), inf()});
    CHECK(t2.num_interior() == 0);
    CHECK(t2.num_directed_edges() == 2);

    // residues 0,1,2 distinct mod 5: one valence-4 vertex
    FiniteTree t3 = build_tree(kP, {pt(0), pt(1), pt(2), inf()});
    CHECK(t3.num_interior() == 1);
    size_t interior = 0;
    for (size_t i = 0; i < t3.nodes().size(); ++i)
        if (!t3.nodes()[i].is_leaf) {
            interior = i;
            CHECK(t3.out_edges(static_cast<int>(i)).size() == 4);
        }
    CHECK(t3.nodes()[interior].point.eq(tp(0, 0)));
}

TEST_CASE("ball of edge and the star partition") {
    FiniteTree T = build_tree(kP, {pt(0), pt(1), inf()});
    int gauss = -1;
    for (size_t i = 0; i < T.nodes().size(); ++i)
        if (!T.nodes()[i].is_leaf) gauss = static_cast<int>(i);
    REQUIRE(gauss >= 0);
    std::set<size_t> all;
    size_t total = 0;
    for (int e : T.out_edges(gauss)) {
        auto B = T.ball_of_edge(e);
        auto Bop = T.ball_of_edge(T.opposite(e));
        CHECK(B.size() + Bop.size() == T.leaves().size()); // complement rule
        for (size_t lf : B) all.insert(lf);
        total += B.size();
    }
    CHECK(total == T.leaves().size()); // the star partitions L
    CHECK(all.size() == T.leaves().size());
}

TEST_CASE("apartment pairing examples") {
    CHECK(apartment_pairing(pt(0), inf(), pt(1), pt(5)) == -1);
    CHECK(apartment_pairing(pt(0), inf(), pt(1), pt(-1)) == 0);
    CHECK_THROWS_WITH_AS(apartment_pairing(pt(0), inf(), pt(0), inf()),
                         doctest::Contains("SharedEndpoint"), math_error);
}

TEST_CASE("lemma val: cross ratio valuation equals the apartment pairing") {
    std::mt19937 rng(37);
    std::uniform_int_distribution<long> d(-15, 15);
    std::uniform_int_distribution<int> infroll(0, 9);
    for (long prime : {5L, 7L}) {
        int done = 0;
        while (done < 60) {
            long vals[4];
            for (auto& v : vals) v = d(rng);
            int infat = infroll(rng) == 0 ? infroll(rng) % 4 : -1;
            auto mk = [&](int i) {
                return i == infat ? ProjPoint::infinity(prime, kN)
                                  : ProjPoint::from_rational(prime, BigRat(vals[i]), kN);
            };
            ProjPoint a1 = mk(0), z1 = mk(1), a2 = mk(2), z2 = mk(3);
            if (a1.eq(a2) || z1.eq(z2) || a1.eq(z1) || a1.eq(z2) || a2.eq(z1) || a2.eq(z2))
                continue;
            Padic cr = cross_ratio(a1, z1, a2, z2);
            REQUIRE(!cr.is_zero());
            CHECK(cr.valuation() == apartment_pairing(a1, a2, z1, z2));
            ++done;
        }
    }
}

TEST_CASE("locate finds vertices and edge interiors") {
    FiniteTree T = build_tree(kP, {pt(0), pt(25), inf()});
    // interior vertex at alpha(0, 2)
    auto locv = T.locate(tp(0, 2));
    REQUIRE(locv.has_value());
    CHECK(locv->on_vertex);
    // alpha(0,1) is inside the leaf-ray edge toward infinity
    auto loce = T.locate(tp(0, 1));
    REQUIRE(loce.has_value());
    CHECK(!loce->on_vertex);
}
