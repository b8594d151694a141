#include "padicjac/tree.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace padicjac {

long vdiff(long prime, const BigRat& a, const BigRat& b) {
    BigRat d = a - b;
    if (d == 0) return kValInf;
    return vp(d, prime);
}

long vdiff(long prime, const BigRat& a, const Padic& b) {
    if (b.is_zero()) {
        if (a == 0) return kValInf;
        long va = vp(a, prime);
        return va < b.abs_precision() ? va : kValInf;
    }
    Padic d = Padic::from_rational(prime, a, b.precision() + 4) - b;
    if (d.is_zero()) return kValInf;
    return d.valuation();
}

long vdiff(const Padic& a, const Padic& b) {
    Padic d = a - b;
    if (d.is_zero()) return kValInf;
    return d.valuation();
}

long vdiff(long prime, const BigRat& a, const ProjPoint& y) {
    if (y.is_infinity()) return -kValInf;
    return vdiff(prime, a, y.value());
}

TreePoint TreePoint::make(long prime, const BigRat& center, long m) {
    TreePoint t;
    t.prime_ = prime;
    t.m_ = m;
    if (center == 0) return t;
    long vc = vp(center, prime);
    if (vc >= m) return t; // center is 0 mod p^m
    // keep only the digits in [vc, m)
    BigInt nu = numerator(center), du = denominator(center);
    BigInt pv = pow_int(prime, std::abs(vc));
    if (vc >= 0)
        nu /= pv;
    else
        du /= pv;
    BigInt mod = pow_int(prime, m - vc);
    BigInt u = (nu % mod) * mod_inverse(du % mod, mod) % mod;
    if (u < 0) u += mod;
    BigRat c(u);
    if (vc >= 0)
        c *= BigRat(pv);
    else
        c /= BigRat(pv);
    t.center_ = c;
    return t;
}

TreePoint TreePoint::from_padic_center(const Padic& center, long m) {
    if (center.is_zero()) {
        if (center.abs_precision() < m)
            fail("PrecisionExhausted", "tree point center not known to its radius");
        return make(center.prime(), BigRat(0), m);
    }
    if (center.abs_precision() < m)
        fail("PrecisionExhausted", "tree point center not known to its radius");
    return make(center.prime(), center.to_rational(), m);
}

bool TreePoint::contains(const ProjPoint& y) const {
    if (y.is_infinity()) return false;
    return vdiff(prime_, center_, y.value()) >= m_;
}

bool TreePoint::contains_rational(const BigRat& y) const {
    return vdiff(prime_, center_, y) >= m_;
}

Padic TreePoint::center_padic(long prec) const {
    return Padic::from_rational(prime_, center_, prec);
}

std::string TreePoint::key() const {
    std::ostringstream os;
    os << m_ << "|" << numerator(center_).str() << "/" << denominator(center_).str();
    return os.str();
}

std::string TreePoint::label() const {
    std::ostringstream os;
    os << "a(" << numerator(center_).str();
    if (denominator(center_) != 1) os << "/" << denominator(center_).str();
    os << ", " << prime_ << "^" << -m_ << ")";
    return os.str();
}

long tree_distance(const TreePoint& a, const TreePoint& b) {
    long mj = std::min({a.m(), b.m(), vdiff(a.prime(), a.center(), b.center())});
    return (a.m() - mj) + (b.m() - mj);
}

TreePoint tree_join(const TreePoint& a, const TreePoint& b) {
    long mj = std::min({a.m(), b.m(), vdiff(a.prime(), a.center(), b.center())});
    return TreePoint::make(a.prime(), a.center(), mj);
}

bool on_path(const TreePoint& a, const TreePoint& b, const TreePoint& c) {
    return tree_distance(a, b) + tree_distance(b, c) == tree_distance(a, c);
}

TreePoint join_points(const ProjPoint& x0, const ProjPoint& x1) {
    if (x0.is_infinity() || x1.is_infinity())
        fail("DegenerateConfiguration", "join of points requires finite points");
    long v = vdiff(x0.value(), x1.value());
    if (v >= kValInf) fail("EqualPoints", "join of equal points");
    return TreePoint::from_padic_center(x0.value(), v);
}

TreePoint median(const ProjPoint& x0, const ProjPoint& x1, const ProjPoint& x2) {
    if (x0.eq(x1) || x0.eq(x2) || x1.eq(x2)) fail("NotDistinct", "median needs distinct points");
    if (x2.is_infinity()) return join_points(x0, x1);
    if (x1.is_infinity()) return join_points(x0, x2);
    if (x0.is_infinity()) return join_points(x1, x2);
    // join of the closest pair (the pair of maximal valuation)
    long v01 = vdiff(x0.value(), x1.value());
    long v02 = vdiff(x0.value(), x2.value());
    long v12 = vdiff(x1.value(), x2.value());
    if (v01 >= v02 && v01 >= v12) return join_points(x0, x1);
    if (v02 >= v12) return join_points(x0, x2);
    return join_points(x1, x2);
}

TreePoint proj_onto_apartment(const TreePoint& beta, const ProjPoint& y0, const ProjPoint& y1) {
    if (y0.eq(y1)) fail("DegenerateConfiguration", "apartment needs two distinct ends");
    long p = beta.prime();
    if (y0.is_infinity() || y1.is_infinity()) {
        const ProjPoint& yf = y0.is_infinity() ? y1 : y0;
        long vc = vdiff(p, beta.center(), yf.value());
        long e = std::min(beta.m(), vc);
        return TreePoint::from_padic_center(yf.value(), e);
    }
    long mJ = vdiff(y0.value(), y1.value()); // join exponent
    long v0c = vdiff(p, beta.center(), y0.value());
    long v1c = vdiff(p, beta.center(), y1.value());
    // attachment point of beta's center on the apartment
    const ProjPoint* anchor = &y0;
    long attach = mJ;
    if (v0c > std::max(mJ, v1c)) {
        anchor = &y0;
        attach = v0c;
    } else if (v1c > std::max(mJ, v0c)) {
        anchor = &y1;
        attach = v1c;
    }
    long e = std::clamp(beta.m(), mJ, attach);
    return TreePoint::from_padic_center(anchor->value(), e);
}

namespace {

// A disk of P^1: a closed ball {v(z-c) >= m}, or the complement-with-infinity
// {v(z-c) <= m} u {inf}. Used for ball images under Moebius maps.
struct PDisk {
    bool with_inf = false;
    BigRat center = 0;
    long m = 0;
};

PDisk disk_image(const Moebius& g, const PDisk& D, long prime, long prec) {
    (void)prec;
    long vdet = vp(g.det(), prime);
    if (g.c() == 0) {
        // affine z -> (a z + b)/d
        long shift = vp(g.a(), prime) - vp(g.d(), prime);
        BigRat gc = g.act_rational(D.center);
        return PDisk{D.with_inf, gc, D.m + shift};
    }
    long vc = vp(g.c(), prime);
    BigRat pole = make_rat(-g.d(), g.c());
    BigRat ginf = make_rat(g.a(), g.c());
    long vpc = vdiff(prime, pole, D.center);
    if (!D.with_inf) {
        if (vpc >= D.m) {
            // pole inside the closed ball: image is a ball around infinity
            return PDisk{true, ginf, vdet - 2 * vc - D.m};
        }
        long mprime = vdet + D.m - 2 * vc - 2 * vpc;
        return PDisk{false, g.act_rational(D.center), mprime};
    }
    // with_inf disk: complement is the closed ball (center, m+1)
    PDisk comp{false, D.center, D.m + 1};
    PDisk img = disk_image(g, comp, prime, prec);
    if (img.with_inf) return PDisk{false, img.center, img.m + 1};
    return PDisk{true, img.center, img.m - 1};
}

} // namespace

TreePoint moebius_act_tree(const Moebius& g, const TreePoint& x) {
    PDisk D{false, x.center(), x.m()};
    PDisk img = disk_image(g, D, x.prime(), g.prec());
    // A ball-around-infinity image corresponds to the seminorm of the sphere
    // {v(z-c) = m}, i.e. alpha(c, p^-m).
    return TreePoint::make(x.prime(), img.center, img.m);
}

TreePoint unit_step_toward(const TreePoint& from, const ProjPoint& leaf) {
    if (leaf.is_infinity()) return TreePoint::make(from.prime(), from.center(), from.m() - 1);
    long vy = vdiff(from.prime(), from.center(), leaf.value());
    if (vy >= from.m()) return TreePoint::from_padic_center(leaf.value(), from.m() + 1);
    return TreePoint::make(from.prime(), from.center(), from.m() - 1);
}

TreePoint unit_step(const TreePoint& from, const TreePoint& to) {
    TreePoint j = tree_join(from, to);
    if (from.m() > j.m()) return TreePoint::make(from.prime(), from.center(), from.m() - 1);
    return TreePoint::make(to.prime(), to.center(), from.m() + 1);
}

namespace {

struct LeafStats {
    bool has_inf = false;
    long m_root = kValInf; // min pairwise valuation of finite leaves
};

LeafStats leaf_stats(const std::vector<ProjPoint>& L) {
    LeafStats s;
    std::vector<const Padic*> fin;
    for (const auto& y : L) {
        if (y.is_infinity())
            s.has_inf = true;
        else
            fin.push_back(&y.value());
    }
    for (size_t i = 0; i < fin.size(); ++i)
        for (size_t j = i + 1; j < fin.size(); ++j)
            s.m_root = std::min(s.m_root, vdiff(*fin[i], *fin[j]));
    return s;
}

Retraction retract_impl(const ProjPoint& z, const std::vector<ProjPoint>& L,
                        const LeafStats& s) {
    if (L.size() < 2) fail("DegenerateConfiguration", "retraction needs |L| >= 2");
    for (size_t i = 0; i < L.size(); ++i)
        if (z.eq(L[i])) return Retraction{true, i, TreePoint{}};
    auto root = [&]() {
        for (const auto& y : L)
            if (!y.is_infinity()) return TreePoint::from_padic_center(y.value(), s.m_root);
        fail("DegenerateConfiguration", "no finite leaf");
    };
    if (z.is_infinity()) {
        // inf not in L here (handled by the fixed-point loop)
        return Retraction{false, 0, root()};
    }
    long cexp = -kValInf;
    for (const auto& y : L)
        if (!y.is_infinity()) cexp = std::max(cexp, vdiff(z.value(), y.value()));
    if (s.has_inf || cexp >= s.m_root)
        return Retraction{false, 0, TreePoint::from_padic_center(z.value(), cexp)};
    return Retraction{false, 0, root()};
}

} // namespace

Retraction retract(const ProjPoint& z, const std::vector<ProjPoint>& L) {
    return retract_impl(z, L, leaf_stats(L));
}

TreePoint retract_tree_point(const TreePoint& a, const std::vector<ProjPoint>& L) {
    if (L.size() < 2) fail("DegenerateConfiguration", "retraction needs |L| >= 2");
    LeafStats s = leaf_stats(L);
    long p = a.prime();
    bool contains_leaf = false;
    long cexp = -kValInf; // nearest finite leaf exponent
    bool outside_leaf = false;
    for (const auto& y : L) {
        if (y.is_infinity()) continue;
        long v = vdiff(p, a.center(), y.value());
        cexp = std::max(cexp, v);
        if (v >= a.m())
            contains_leaf = true;
        else
            outside_leaf = true;
    }
    auto root = [&]() {
        for (const auto& y : L)
            if (!y.is_infinity()) return TreePoint::from_padic_center(y.value(), s.m_root);
        fail("DegenerateConfiguration", "no finite leaf");
    };
    if (contains_leaf && (s.has_inf || outside_leaf)) return a; // already on the tree
    if (!contains_leaf) {
        if (s.has_inf || cexp >= s.m_root) return TreePoint::make(p, a.center(), cexp);
        return root();
    }
    return root(); // ball swallows every finite leaf and inf not in L
}

size_t FiniteTree::num_interior() const {
    size_t n = 0;
    for (const auto& nd : nodes_)
        if (!nd.is_leaf) ++n;
    return n;
}

bool FiniteTree::leaf_edge(int e) const {
    return nodes_[edges_[e].src].is_leaf || nodes_[edges_[e].dst].is_leaf;
}

long FiniteTree::edge_length(int e) const {
    if (leaf_edge(e)) fail("DegenerateConfiguration", "leaf edges have infinite length");
    return tree_distance(nodes_[edges_[e].src].point, nodes_[edges_[e].dst].point);
}

std::vector<size_t> FiniteTree::ball_of_edge(int e) const {
    std::vector<size_t> out;
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<int> stack{edges_[e].dst};
    seen[edges_[e].src] = true;
    seen[edges_[e].dst] = true;
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        if (nodes_[n].is_leaf) out.push_back(nodes_[n].leaf_index);
        for (int oe : adj_[n]) {
            int t = edges_[oe].dst;
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    // unblock the path back through src for correctness of seen marking:
    // (src was marked to cut the edge; nothing else to do)
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// a lies on the (infinite) ray from the interior vertex U to the leaf lf.
bool on_leaf_ray(long prime, const TreePoint& U, const ProjPoint& lf, const TreePoint& a) {
    if (lf.is_infinity())
        return a.m() < U.m() && vdiff(prime, a.center(), U.center()) >= a.m();
    // the path to a finite leaf may rise to the join first
    long jm = std::min(U.m(), vdiff(prime, U.center(), lf.value()));
    bool on_up =
        a.m() >= jm && a.m() <= U.m() && vdiff(prime, a.center(), U.center()) >= a.m();
    bool on_down = a.m() >= jm && a.contains(lf);
    return (on_up || on_down) && !a.eq(U);
}

} // namespace

std::optional<FiniteTree::Location> FiniteTree::locate(const TreePoint& a) const {
    int V = base_vertex();
    if (V < 0) {
        // two-leaf tree: a single apartment
        const ProjPoint& y0 = leaves_[nodes_[edges_[0].src].leaf_index];
        const ProjPoint& y1 = leaves_[nodes_[edges_[0].dst].leaf_index];
        bool on;
        if (y0.is_infinity() || y1.is_infinity()) {
            const ProjPoint& yf = y0.is_infinity() ? y1 : y0;
            on = a.contains(yf);
        } else {
            long mJ = vdiff(y0.value(), y1.value());
            on = a.m() >= mJ && (a.contains(y0) || a.contains(y1));
        }
        if (on) return Location{false, -1, 0};
        return std::nullopt;
    }
    // walk toward a, one vertex at a time
    for (size_t guard = 0; guard <= nodes_.size() + 2; ++guard) {
        const TreePoint& P = nodes_[V].point;
        if (P.eq(a)) return Location{true, V, -1};
        long dVa = tree_distance(P, a);
        int down = -1;
        for (int e : adj_[V]) {
            const Node& X = nodes_[edges_[e].dst];
            TreePoint s = X.is_leaf ? unit_step_toward(P, leaves_[X.leaf_index])
                                    : unit_step(P, X.point);
            if (tree_distance(s, a) == dVa - 1) {
                down = e;
                break;
            }
        }
        if (down < 0) return std::nullopt; // a is off the tree at V
        const Node& X = nodes_[edges_[down].dst];
        if (X.is_leaf) {
            if (on_leaf_ray(prime_, P, leaves_[X.leaf_index], a))
                return Location{false, -1, down};
            return std::nullopt;
        }
        if (a.eq(X.point)) return Location{true, edges_[down].dst, -1};
        if (on_path(P, a, X.point)) return Location{false, -1, down};
        V = edges_[down].dst;
    }
    return std::nullopt;
}

int FiniteTree::base_vertex() const {
    int best = -1;
    std::string bk;
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].is_leaf) continue;
        std::string k = nodes_[i].point.key();
        if (best < 0 || k < bk) {
            best = static_cast<int>(i);
            bk = k;
        }
    }
    return best;
}

std::vector<int> FiniteTree::cover_at_depth(int depth) const {
    int b = base_vertex();
    if (b < 0) return {0, 1};
    std::vector<int> cover = adj_[b];
    for (int k = 0; k < depth; ++k) {
        std::vector<int> next;
        bool refined = false;
        for (int e : cover) {
            int t = edges_[e].dst;
            if (nodes_[t].is_leaf) {
                next.push_back(e);
                continue;
            }
            refined = true;
            for (int oe : adj_[t])
                if (oe != opposite(e)) next.push_back(oe);
        }
        cover = std::move(next);
        if (!refined) break;
    }
    std::sort(cover.begin(), cover.end());
    return cover;
}

int FiniteTree::max_cover_depth() const {
    int d = 0;
    while (true) {
        auto c = cover_at_depth(d);
        bool all_leaf = true;
        for (int e : c)
            if (!nodes_[edges_[e].dst].is_leaf) all_leaf = false;
        if (all_leaf) return d;
        ++d;
        if (d > 1000) fail("DepthInsufficient", "cover refinement does not terminate");
    }
}

void FiniteTree::add_adj() {
    adj_.assign(nodes_.size(), {});
    for (size_t e = 0; e < edges_.size(); ++e) adj_[edges_[e].src].push_back(static_cast<int>(e));
}

std::string FiniteTree::to_dot() const {
    std::ostringstream os;
    os << "graph tree {\n";
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].is_leaf)
            os << "  n" << i << " [shape=point, xlabel=\"" << leaves_[nodes_[i].leaf_index].to_string()
               << "\"];\n";
        else
            os << "  n" << i << " [label=\"" << nodes_[i].point.label() << "\"];\n";
    }
    for (size_t e = 0; e < edges_.size(); e += 2) {
        os << "  n" << edges_[e].src << " -- n" << edges_[e].dst;
        if (!leaf_edge(static_cast<int>(e))) os << " [label=\"" << edge_length(static_cast<int>(e)) << "\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

FiniteTree build_tree(long prime, std::vector<ProjPoint> L) {
    // dedupe to precision and order canonically
    std::sort(L.begin(), L.end(),
              [](const ProjPoint& a, const ProjPoint& b) { return a.sort_key() < b.sort_key(); });
    std::vector<ProjPoint> U;
    for (const auto& x : L) {
        bool dup = false;
        for (const auto& y : U)
            if (x.eq(y)) dup = true;
        if (!dup) U.push_back(x);
    }
    if (U.size() < 2) fail("DegenerateConfiguration", "tree needs at least two distinct points");

    FiniteTree T;
    T.prime_ = prime;
    T.leaves_ = U;
    T.leaf_nodes_.resize(U.size());
    T.nodes_.push_back({true, 0, TreePoint{}});
    T.nodes_.push_back({true, 1, TreePoint{}});
    T.leaf_nodes_[0] = 0;
    T.leaf_nodes_[1] = 1;
    T.edges_.push_back({0, 1});
    T.edges_.push_back({1, 0});
    T.add_adj();

    std::vector<ProjPoint> cur{U[0], U[1]};
    LeafStats stats;
    stats.has_inf = U[0].is_infinity() || U[1].is_infinity();
    if (!stats.has_inf) stats.m_root = vdiff(U[0].value(), U[1].value());
    for (size_t i = 2; i < U.size(); ++i) {
        Retraction r = retract_impl(U[i], cur, stats);
        // attach point is a type-II point because U[i] is not among cur
        const TreePoint& a = r.point;
        int attach;
        auto loc = T.locate(a);
        if (!loc) fail("DegenerateConfiguration", "retraction left the current tree: " + a.label());
        if (loc->on_vertex) {
            attach = loc->vertex;
        } else {
            int e = loc->edge;
            int u = T.edges_[e].src, v = T.edges_[e].dst;
            attach = static_cast<int>(T.nodes_.size());
            T.nodes_.push_back({false, 0, a});
            T.edges_[e] = {u, attach};
            T.edges_[e ^ 1] = {attach, u};
            T.edges_.push_back({attach, v});
            T.edges_.push_back({v, attach});
        }
        int leafnode = static_cast<int>(T.nodes_.size());
        T.nodes_.push_back({true, i, TreePoint{}});
        T.leaf_nodes_[i] = leafnode;
        T.edges_.push_back({attach, leafnode});
        T.edges_.push_back({leafnode, attach});
        T.add_adj();
        // incremental leaf stats
        if (U[i].is_infinity()) {
            stats.has_inf = true;
        } else {
            for (const auto& y : cur)
                if (!y.is_infinity())
                    stats.m_root = std::min(stats.m_root, vdiff(y.value(), U[i].value()));
        }
        cur.push_back(U[i]);
    }
    T.add_adj();
    for (size_t i = 0; i < T.nodes_.size(); ++i)
        if (!T.nodes_[i].is_leaf && T.adj_[i].size() < 3)
            fail("DegenerateConfiguration", "interior vertex of valence < 3 in the minimal model");
    return T;
}

long apartment_position(const TreePoint& q, const ProjPoint& z1, const ProjPoint& z2) {
    if (z2.is_infinity()) return -q.m();
    if (z1.is_infinity()) return q.m();
    TreePoint J = join_points(z1, z2);
    long d = tree_distance(q, J);
    return q.contains(z2) ? d : -d;
}

long apartment_pairing(const ProjPoint& a1, const ProjPoint& a2, const ProjPoint& z1,
                       const ProjPoint& z2) {
    if (a1.eq(a2) || z1.eq(z2))
        fail("DegenerateConfiguration", "apartment pairing needs two distinct apartments");
    if (a1.eq(z1) || a1.eq(z2) || a2.eq(z1) || a2.eq(z2))
        fail("SharedEndpoint", "apartments share an endpoint; pairing is infinite");
    TreePoint q1 = median(a1, z1, z2);
    TreePoint q2 = median(a2, z1, z2);
    if (q1.eq(q2)) return 0;
    return apartment_position(q2, z1, z2) - apartment_position(q1, z1, z2);
}

} // namespace padicjac
