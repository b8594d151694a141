#include "padicjac/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace padicjac {

int MetricGraph::add_vertex() {
    adj_.push_back({});
    return num_vertices() - 1;
}

int MetricGraph::add_edge(int u, int v, long length) {
    if (length <= 0) fail("DegenerateConfiguration", "edge lengths must be positive");
    int e = static_cast<int>(src_.size());
    src_.push_back(u);
    dst_.push_back(v);
    len_.push_back(length);
    src_.push_back(v);
    dst_.push_back(u);
    len_.push_back(length);
    adj_[u].push_back(e);
    adj_[v].push_back(e + 1);
    return e;
}

bool MetricGraph::connected() const {
    if (num_vertices() == 0) return true;
    std::vector<bool> seen(num_vertices(), false);
    std::vector<int> st{0};
    seen[0] = true;
    int cnt = 1;
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (int e : adj_[v])
            if (!seen[dst_[e]]) {
                seen[dst_[e]] = true;
                ++cnt;
                st.push_back(dst_[e]);
            }
    }
    return cnt == num_vertices();
}

int MetricGraph::betti() const {
    return static_cast<int>(num_directed_edges() / 2) - num_vertices() + 1;
}

std::string MetricGraph::canonical_form() const {
    int n = num_vertices();
    auto encode = [&](const std::vector<int>& pi) {
        std::vector<std::string> rows;
        for (size_t e = 0; e < src_.size(); e += 2) {
            int a = pi[src_[e]], b = pi[dst_[e]];
            if (a > b) std::swap(a, b);
            rows.push_back(std::to_string(a) + "-" + std::to_string(b) + ":" +
                           std::to_string(len_[e]));
        }
        std::sort(rows.begin(), rows.end());
        std::string s;
        for (auto& r : rows) s += r + ";";
        return s;
    };
    if (n <= 8) {
        std::vector<int> pi(n);
        std::iota(pi.begin(), pi.end(), 0);
        std::string best;
        do {
            std::string s = encode(pi);
            if (best.empty() || s < best) best = s;
        } while (std::next_permutation(pi.begin(), pi.end()));
        return best;
    }
    // invariant fallback for larger graphs: sorted (degree, sorted incident lengths)
    std::vector<std::string> inv;
    for (int v = 0; v < n; ++v) {
        std::vector<long> ls;
        for (int e : adj_[v]) ls.push_back(len_[e]);
        std::sort(ls.begin(), ls.end());
        std::string s = "d" + std::to_string(adj_[v].size()) + "[";
        for (long l : ls) s += std::to_string(l) + ",";
        inv.push_back(s + "]");
    }
    std::sort(inv.begin(), inv.end());
    std::string s = "V" + std::to_string(n) + "|";
    for (auto& r : inv) s += r;
    return s;
}

bool Cochain::antisymmetric() const {
    for (size_t e = 0; e < v_.size(); e += 2)
        if (v_[e] != -v_[e + 1]) return false;
    return true;
}

Cochain Cochain::operator+(const Cochain& o) const {
    Cochain r(*this);
    for (size_t i = 0; i < v_.size(); ++i) r.v_[i] += o.v_[i];
    return r;
}

Cochain Cochain::operator-() const { return scaled(-1); }

Cochain Cochain::scaled(long k) const {
    Cochain r(*this);
    for (auto& x : r.v_) x *= k;
    return r;
}

bool validate_harmonic(const MetricGraph& G, const Cochain& c) {
    if (!c.antisymmetric()) return false;
    for (int v = 0; v < G.num_vertices(); ++v) {
        long s = 0;
        for (int e : G.out_edges(v)) s += c(e);
        if (s != 0) return false;
    }
    return true;
}

bool validate_harmonic(const FiniteTree& T, const Cochain& c) {
    if (!c.antisymmetric()) return false;
    for (size_t v = 0; v < T.nodes().size(); ++v) {
        if (T.nodes()[v].is_leaf) continue;
        long s = 0;
        for (int e : T.out_edges(static_cast<int>(v))) s += c(e);
        if (s != 0) return false;
    }
    return true;
}

std::vector<Cochain> h1_basis(const MetricGraph& G) {
    int n = G.num_vertices();
    std::vector<int> parent_edge(n, -1);
    std::vector<bool> seen(n, false);
    std::vector<bool> in_tree(G.num_directed_edges(), false);
    std::vector<int> order;
    std::vector<int> st{0};
    if (n == 0) return {};
    seen[0] = true;
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        order.push_back(v);
        for (int e : G.out_edges(v)) {
            int t = G.dst(e);
            if (!seen[t]) {
                seen[t] = true;
                parent_edge[t] = e;
                in_tree[e] = true;
                in_tree[G.opposite(e)] = true;
                st.push_back(t);
            }
        }
    }
    // path from root to v as a cochain
    auto path_to = [&](int v) {
        Cochain c(G.num_directed_edges());
        while (parent_edge[v] != -1) {
            int e = parent_edge[v];
            c.add(e, 1);
            v = G.src(e);
        }
        return c;
    };
    std::vector<Cochain> basis;
    for (size_t e = 0; e < G.num_directed_edges(); e += 2) {
        if (in_tree[e]) continue;
        int u = G.src(static_cast<int>(e)), v = G.dst(static_cast<int>(e));
        Cochain z(G.num_directed_edges());
        z.add(static_cast<int>(e), 1);
        z = z + path_to(u) + (-path_to(v));
        basis.push_back(z);
    }
    return basis;
}

long cycle_pairing(const MetricGraph& G, const Cochain& z1, const Cochain& z2) {
    long s = 0;
    for (size_t e = 0; e < G.num_directed_edges(); e += 2)
        s += z1(static_cast<int>(e)) * z2(static_cast<int>(e)) * G.length(static_cast<int>(e));
    return s;
}

Cochain cochain_from_leaf_masses(const FiniteTree& T, const std::vector<long>& mass) {
    if (mass.size() != T.leaves().size())
        fail("DegenerateConfiguration", "one mass per leaf required");
    long total = std::accumulate(mass.begin(), mass.end(), 0L);
    if (total != 0) fail("NotDegreeZero", "leaf masses must sum to zero");
    Cochain c(T.num_directed_edges());
    for (size_t e = 0; e < T.num_directed_edges(); e += 2) {
        long s = 0;
        for (size_t lf : T.ball_of_edge(static_cast<int>(e))) s += mass[lf];
        c.set(static_cast<int>(e), s);
    }
    return c;
}

long measure_of(const FiniteTree& T, const Cochain& c, const std::vector<size_t>& S,
                unsigned salt) {
    std::vector<bool> want(T.leaves().size(), false);
    for (size_t i : S) {
        if (i >= want.size()) fail("NotABallUnion", "leaf index out of range");
        want[i] = true;
    }
    // Greedy decomposition into maximal balls: an edge ball is usable iff it
    // is contained in S; pick maximal usable balls covering S. The salt
    // rotates the scan order to exercise different decompositions.
    std::vector<bool> covered(T.leaves().size(), false);
    long total = 0;
    size_t E = T.num_directed_edges();
    // precompute balls
    std::vector<std::vector<size_t>> balls(E);
    for (size_t e = 0; e < E; ++e) balls[e] = T.ball_of_edge(static_cast<int>(e));
    std::vector<size_t> order(E);
    std::iota(order.begin(), order.end(), 0);
    if (salt) {
        // deterministic reshuffle
        for (size_t i = E; i > 1; --i) {
            salt = salt * 1664525u + 1013904223u;
            std::swap(order[i - 1], order[salt % i]);
        }
    } else {
        // largest balls first
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return balls[a].size() > balls[b].size();
        });
    }
    for (size_t e : order) {
        const auto& B = balls[e];
        if (B.empty()) continue;
        bool usable = true, needed = false;
        for (size_t lf : B) {
            if (!want[lf]) usable = false;
            if (!covered[lf]) needed = true;
        }
        if (!usable || !needed) continue;
        bool clean = true;
        for (size_t lf : B)
            if (covered[lf]) clean = false; // would double count
        if (!clean) continue;
        for (size_t lf : B) covered[lf] = true;
        total += c(static_cast<int>(e));
    }
    for (size_t i = 0; i < want.size(); ++i)
        if (want[i] && !covered[i]) fail("NotABallUnion", "could not decompose S into balls");
    return total;
}

std::string to_dot(const MetricGraph& G) {
    std::ostringstream os;
    os << "graph quotient {\n";
    for (int v = 0; v < G.num_vertices(); ++v) os << "  v" << v << ";\n";
    for (size_t e = 0; e < G.num_directed_edges(); e += 2)
        os << "  v" << G.src(static_cast<int>(e)) << " -- v" << G.dst(static_cast<int>(e))
           << " [label=\"" << G.length(static_cast<int>(e)) << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace padicjac
