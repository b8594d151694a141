#pragma once

#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "padicjac/graph.hpp"

namespace padicjac {

// Reduced word over the free group on g generators; letters +i / -i are the
// i-th generator (1-based) and its inverse.
class GroupWord {
public:
    GroupWord() = default;
    explicit GroupWord(std::vector<int> letters);

    static GroupWord identity() { return GroupWord(); }
    bool is_identity() const { return letters_.empty(); }
    size_t length() const { return letters_.size(); }
    const std::vector<int>& letters() const { return letters_; }

    GroupWord operator*(const GroupWord& o) const;
    GroupWord inverse() const;
    bool operator==(const GroupWord& o) const { return letters_ == o.letters_; }

    std::string to_string() const;

private:
    std::vector<int> letters_;
};

// All reduced words of length <= N, ordered by length then lexicographically
// in the letter order g1 < g1^-1 < g2 < g2^-1 < ...
std::vector<GroupWord> enumerate_words(int g, int N);

struct FixedData {
    ProjPoint attractive; // z+
    ProjPoint repulsive;  // z-
    long translation_length = 0;
};

// Eigen-analysis of a hyperbolic element; NotHyperbolic otherwise.
FixedData analyze_element(const Moebius& m);

struct PingPongBall {
    ProjPoint center; // a generator fixed point, possibly infinity
    long radius_exp;  // ball B(center, p^-k); around infinity this is {v(z) <= -k}
};

struct PingPongCertificate {
    // 2g balls: index i at z+ of generator i, index i+g at z- of generator i.
    std::vector<PingPongBall> balls;
};

// Quotient graph of the tree by the group action, with projection data.
struct QuotientGraphData {
    int depth = 0;
    MetricGraph graph; // smoothed metric graph, integer lengths
    TreePoint v0;
    std::vector<TreePoint> vertex_rep;                       // per graph vertex
    std::vector<std::pair<TreePoint, TreePoint>> edge_rep;   // per directed edge
    std::unordered_map<std::string, int> unit_edge_to_qedge; // directed unit tree edge -> directed edge
    std::vector<PingPongBall> cert_balls; // 2g balls; ball i is undone by letters[i]
    std::vector<Moebius> letters;         // inverse generators then generators
    std::vector<Moebius> window_words;    // near translates, fallback lookups

    // Directed quotient edge under a directed unit tree edge (u -> v), or -1
    // when the edge cannot be matched into the window. Reduces the edge into
    // the fundamental region by ping-pong ball membership, then matches
    // against the registered representatives via the near translates.
    int lookup_unit_edge(const TreePoint& u, const TreePoint& v) const;
};

struct WordMat {
    GroupWord word;
    Moebius mat;
};

class SchottkyGroup {
public:
    SchottkyGroup(long prime, long prec, std::vector<Moebius> generators);

    long prime() const { return prime_; }
    long prec() const { return prec_; }
    int genus() const { return static_cast<int>(gens_.size()); }
    const Moebius& generator(int i) const { return gens_[i]; } // 0-based
    const FixedData& fixed(int i) const { return fixed_[i]; }
    const PingPongCertificate& certificate() const { return cert_; }
    long max_translation_length() const;

    Moebius word_matrix(const GroupWord& w) const;
    // All reduced words of length <= N with their matrices, by length then
    // lexicographic order; cached and grown on demand.
    const std::vector<WordMat>& word_table(int N) const;

    // L_N: orbit of the generator fixed points under words of length <= N.
    std::vector<ProjPoint> limit_set(int N) const;
    const FiniteTree& tree(int N) const; // T_K(L_N), cached

    // Cached; verifies stabilization against depth N+1 and betti == genus.
    const QuotientGraphData& quotient(int N) const;
    QuotientGraphData build_quotient_raw(int N) const;

    // 1-cycle in H1 of the quotient from the axis path of w.
    Cochain cycle_of(const QuotientGraphData& Q, const GroupWord& w) const;
    long pairing_gamma(const QuotientGraphData& Q, const GroupWord& w1, const GroupWord& w2) const;
    long pairing_gamma(const GroupWord& w1, const GroupWord& w2) const; // default depth
    std::vector<std::vector<long>> gram_matrix() const;

    // Gamma-invariant harmonic measure mu_w on the finite tree T, as an edge
    // cochain (Thm-level identity mu_w(e) = cycle pairing slope).
    Cochain mu_gamma(const QuotientGraphData& Q, const FiniteTree& T, const GroupWord& w) const;

    int default_depth() const { return default_depth_; }
    void set_default_depth(int n) { default_depth_ = n; }

private:
    PingPongCertificate find_ping_pong() const;
    QuotientGraphData build_quotient_inner(int N, long window_radius) const;

    long prime_ = 0;
    long prec_ = 0;
    std::vector<Moebius> gens_;
    std::vector<FixedData> fixed_;
    PingPongCertificate cert_;
    int default_depth_ = 3;
    mutable std::map<int, QuotientGraphData> qcache_;
    mutable std::map<int, std::shared_ptr<FiniteTree>> tcache_;
    mutable std::map<int, std::vector<ProjPoint>> lcache_;
    mutable std::vector<WordMat> wtable_;
    mutable int wtable_len_ = -1;
};

} // namespace padicjac
