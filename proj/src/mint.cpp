#include "padicjac/mint.hpp"

#include <algorithm>

namespace padicjac {

void check_degree_zero(const Divisor& D) {
    long deg = 0;
    for (const auto& t : D) deg += t.mult;
    if (deg != 0) fail("NotDegreeZero", "divisor has degree " + std::to_string(deg));
}

namespace {

// One linear-form factor (q - p); infinite points contribute 1.
Padic fd_factor(const ProjPoint& q, const ProjPoint& p) {
    long prime = q.prime();
    long n = std::max<long>(q.prec(), p.prec());
    if (q.is_infinity() || p.is_infinity()) return Padic::one(prime, n);
    Padic d = q.value() - p.value();
    if (d.is_zero()) fail("SupportMeetsEvaluationPoint", "evaluation point meets the support");
    return d;
}

Padic fd_raw(const Divisor& D, const ProjPoint& q) {
    if (D.empty()) fail("DegenerateConfiguration", "empty divisor has no prime");
    Padic r = Padic::one(q.prime(), q.prec() > 0 ? q.prec() : 24);
    for (const auto& t : D) r = r * fd_factor(q, t.point).pow(t.mult);
    return r;
}

} // namespace

Padic evaluate_fD(const Divisor& D, const ProjPoint& q, const ProjPoint& b0) {
    check_degree_zero(D);
    if (D.empty() || std::all_of(D.begin(), D.end(), [](const auto& t) { return t.mult == 0; }))
        return Padic::one(q.prime(), q.prec() > 0 ? q.prec() : 24);
    return fd_raw(D, q) / fd_raw(D, b0);
}

Padic riemann_integral(const FiniteTree& T, const Cochain& c, const Divisor& D, int depth) {
    check_degree_zero(D);
    long prime = T.prime();
    long prec = 24;
    for (const auto& lf : T.leaves())
        if (!lf.is_infinity() && !lf.value().is_zero()) prec = lf.value().precision();
    Padic prod = Padic::one(prime, prec);
    if (D.empty()) return prod;
    if (depth < 0) depth = T.max_cover_depth();
    for (int e : T.cover_at_depth(depth)) {
        long ce = c(e);
        if (ce == 0) continue;
        auto ball = T.ball_of_edge(e);
        if (ball.empty()) fail("DepthInsufficient", "cover edge with empty ball");
        const ProjPoint& sample = T.leaves()[ball.front()]; // leaves are sorted
        prod = prod * fd_raw(D, sample).pow(ce);
    }
    return prod;
}

namespace {

// Potential of the cochain along tree paths: phi(x) - phi(ref) equals the
// length-weighted cochain sum from ref to x.
struct Potential {
    const FiniteTree* T;
    std::vector<long> at_node; // interior nodes; 0 for leaves (unused)
    bool two_leaf = false;

    long eval(const TreePoint& x, const Cochain& c) const {
        if (two_leaf) {
            const ProjPoint& y0 = T->leaves()[0];
            const ProjPoint& y1 = T->leaves()[1];
            // edge 0 is directed leaf0 -> leaf1
            return c(0) * apartment_position(x, y0, y1);
        }
        auto loc = T->locate(x);
        if (!loc) fail("DegenerateConfiguration", "point off the tree: " + x.label());
        if (loc->on_vertex) return at_node[loc->vertex];
        int e = loc->edge;
        int u = T->src(e);
        if (T->nodes()[u].is_leaf) {
            e = T->opposite(e);
            u = T->src(e);
        }
        return at_node[u] + c(e) * tree_distance(T->nodes()[u].point, x);
    }
};

Potential make_potential(const FiniteTree& T, const Cochain& c) {
    Potential phi;
    phi.T = &T;
    phi.at_node.assign(T.nodes().size(), 0);
    int base = T.base_vertex();
    if (base < 0) {
        phi.two_leaf = true;
        return phi;
    }
    std::vector<bool> seen(T.nodes().size(), false);
    std::vector<int> st{base};
    seen[base] = true;
    while (!st.empty()) {
        int u = st.back();
        st.pop_back();
        for (int e : T.out_edges(u)) {
            int v = T.dst(e);
            if (seen[v] || T.nodes()[v].is_leaf) continue;
            seen[v] = true;
            phi.at_node[v] = phi.at_node[u] + c(e) * T.edge_length(e);
            st.push_back(v);
        }
    }
    return phi;
}

} // namespace

long valuation_of_integral(const FiniteTree& T, const Cochain& c, const Divisor& D) {
    check_degree_zero(D);
    Potential phi = make_potential(T, c);
    long total = 0;
    for (const auto& t : D) {
        if (t.mult == 0) continue;
        Retraction r = retract(t.point, T.leaves());
        if (r.is_leaf) fail("SupportMeetsEvaluationPoint", "divisor support meets the leaf set");
        total += t.mult * phi.eval(r.point, c);
    }
    return total;
}

Cochain mu_tilde_rational(const FiniteTree& T, const Divisor& zeros_poles) {
    check_degree_zero(zeros_poles);
    std::vector<long> mass(T.leaves().size(), 0);
    for (const auto& t : zeros_poles) {
        bool found = false;
        for (size_t i = 0; i < T.leaves().size(); ++i) {
            if (T.leaves()[i].eq(t.point)) {
                mass[i] += t.mult;
                found = true;
                break;
            }
        }
        if (!found)
            fail("DegenerateConfiguration",
                 "mu-tilde support point is not a leaf: " + t.point.to_string());
    }
    return cochain_from_leaf_masses(T, mass);
}

PoissonPair poisson_check(const FiniteTree& T, const Divisor& u, const ProjPoint& z,
                          const ProjPoint& z0, int depth) {
    PoissonPair out;
    out.direct = evaluate_fD(u, z, z0);
    Cochain mu = mu_tilde_rational(T, u);
    Divisor D{{z, 1}, {z0, -1}};
    out.integral = riemann_integral(T, mu, D, depth);
    return out;
}

} // namespace padicjac
