#pragma once

#include <string>
#include <vector>

#include "padicjac/tree.hpp"

namespace padicjac {

// Finite metric graph: directed edges in opposite pairs (e, e^1), positive
// integer lengths shared within a pair. Loops are allowed.
class MetricGraph {
public:
    int add_vertex();
    // Adds the pair (u->v, v->u); returns the id of u->v.
    int add_edge(int u, int v, long length);

    int num_vertices() const { return static_cast<int>(adj_.size()); }
    size_t num_directed_edges() const { return src_.size(); }
    int opposite(int e) const { return e ^ 1; }
    int src(int e) const { return src_[e]; }
    int dst(int e) const { return dst_[e]; }
    long length(int e) const { return len_[e]; }
    const std::vector<int>& out_edges(int v) const { return adj_[v]; }
    bool connected() const;
    int betti() const; // |E|/2 - |V| + 1 for a connected graph

    // Lexicographically minimal edge-list encoding over all vertex
    // relabelings (exact for small graphs, invariant-based beyond).
    std::string canonical_form() const;

private:
    std::vector<int> src_, dst_;
    std::vector<long> len_;
    std::vector<std::vector<int>> adj_;
};

// Integer cochain on the directed edges of a graph or tree, antisymmetric
// under edge reversal.
class Cochain {
public:
    Cochain() = default;
    explicit Cochain(size_t directed_edges) : v_(directed_edges, 0) {}

    long operator()(int e) const { return v_[e]; }
    void set(int e, long value) {
        v_[e] = value;
        v_[e ^ 1] = -value;
    }
    void add(int e, long value) {
        v_[e] += value;
        v_[e ^ 1] -= value;
    }
    size_t size() const { return v_.size(); }
    bool antisymmetric() const;

    Cochain operator+(const Cochain& o) const;
    Cochain operator-() const;
    Cochain scaled(long k) const;
    bool operator==(const Cochain& o) const { return v_ == o.v_; }

private:
    std::vector<long> v_;
};

// Vertex law: outgoing sum vanishes at every vertex of the graph.
bool validate_harmonic(const MetricGraph& G, const Cochain& c);
// On a tree the law is required at interior vertices only.
bool validate_harmonic(const FiniteTree& T, const Cochain& c);

// Fundamental cycles of a spanning tree, one per non-tree edge pair,
// returned as harmonic cochains; the H1 basis.
std::vector<Cochain> h1_basis(const MetricGraph& G);

// (z1, z2) = sum over edge pairs of z1(e) z2(e) l(e).
long cycle_pairing(const MetricGraph& G, const Cochain& z1, const Cochain& z2);

// Harmonic cochain on a tree from leaf masses (must sum to zero):
// c(e) = sum of masses over the leaves of B(e).
Cochain cochain_from_leaf_masses(const FiniteTree& T, const std::vector<long>& mass);

// Measure of a leaf subset S against a harmonic cochain; S must be a
// disjoint union of edge balls (every subset is, via leaf edges).
// `salt` selects among equivalent ball decompositions (test hook).
long measure_of(const FiniteTree& T, const Cochain& c, const std::vector<size_t>& S,
                unsigned salt = 0);

std::string to_dot(const MetricGraph& G);

} // namespace padicjac
