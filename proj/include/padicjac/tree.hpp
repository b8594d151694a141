#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padicjac/projline.hpp"

namespace padicjac {

constexpr long kValInf = Padic::kExactZeroAbs;

// Exact p-adic valuation of a-b; kValInf when equal (resp. equal to
// precision for the Padic overloads).
long vdiff(long prime, const BigRat& a, const BigRat& b);
long vdiff(long prime, const BigRat& a, const Padic& b);
long vdiff(const Padic& a, const Padic& b);
long vdiff(long prime, const BigRat& a, const ProjPoint& y); // kValInf-safe; y=inf -> -kValInf

// Type-II point alpha(x, p^-m) of the Bruhat-Tits tree: the ball seminorm of
// B(x, p^-m) with finite center x and radius exponent m. Canonical form
// truncates the center's digits at exponent m, so equal seminorms have
// identical (exact rational) representations.
class TreePoint {
public:
    TreePoint() = default;
    static TreePoint make(long prime, const BigRat& center, long m);
    // Precondition: the center is known at least to absolute precision m.
    static TreePoint from_padic_center(const Padic& center, long m);

    long prime() const { return prime_; }
    const BigRat& center() const { return center_; }
    long m() const { return m_; }

    bool eq(const TreePoint& o) const { return m_ == o.m_ && center_ == o.center_; }
    bool contains(const ProjPoint& y) const; // y in the closed ball (false for inf)
    bool contains_rational(const BigRat& y) const;

    Padic center_padic(long prec) const;
    std::string key() const;   // canonical serialization, total order
    std::string label() const; // "a(x, p^-m)" for DOT and messages

private:
    long prime_ = 0;
    BigRat center_ = 0;
    long m_ = 0;
};

// Tree metric in valuation units; exact.
long tree_distance(const TreePoint& a, const TreePoint& b);
// Smallest ball containing both (the highest point of the path a..b).
TreePoint tree_join(const TreePoint& a, const TreePoint& b);
// b lies on the path from a to c (endpoints included).
bool on_path(const TreePoint& a, const TreePoint& b, const TreePoint& c);

// x0 v x1 = alpha(x0, |x0-x1|); both finite and distinct.
TreePoint join_points(const ProjPoint& x0, const ProjPoint& x1);
// The unique point on the three pairwise apartments (at most one point inf).
TreePoint median(const ProjPoint& x0, const ProjPoint& x1, const ProjPoint& x2);

// Nearest point of the apartment A_{y0,y1} to beta.
TreePoint proj_onto_apartment(const TreePoint& beta, const ProjPoint& y0, const ProjPoint& y1);

// Moebius action on type-II points (exact).
TreePoint moebius_act_tree(const Moebius& g, const TreePoint& x);

// First unit step from a BT vertex toward a boundary point (rises to the
// join first when the leaf is outside the ball) or toward another vertex.
TreePoint unit_step_toward(const TreePoint& from, const ProjPoint& leaf);
TreePoint unit_step(const TreePoint& from, const TreePoint& to);

// Retraction red_L of a K-point (or a type-II point) onto T_K(L).
struct Retraction {
    bool is_leaf = false;
    size_t leaf_index = 0; // into L when is_leaf
    TreePoint point;       // when !is_leaf
};
Retraction retract(const ProjPoint& z, const std::vector<ProjPoint>& L);
TreePoint retract_tree_point(const TreePoint& a, const std::vector<ProjPoint>& L);

// The finite subtree T_K(L) of a finite point set L (|L| >= 2), minimal
// model: interior vertices have valence >= 3. Leaf-incident edges have
// infinite length.
class FiniteTree {
public:
    struct Node {
        bool is_leaf = false;
        size_t leaf_index = 0; // into leaves() when is_leaf
        TreePoint point;       // when interior
    };
    struct EdgeRec {
        int src = -1, dst = -1;
    };

    long prime() const { return prime_; }
    const std::vector<ProjPoint>& leaves() const { return leaves_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    size_t num_interior() const;

    // Directed edges; opposite(e) = e^1.
    size_t num_directed_edges() const { return edges_.size(); }
    int opposite(int e) const { return e ^ 1; }
    int src(int e) const { return edges_[e].src; }
    int dst(int e) const { return edges_[e].dst; }
    const std::vector<int>& out_edges(int node) const { return adj_[node]; }
    bool leaf_edge(int e) const;
    // Length of an interior-interior edge; leaf edges are infinite (error).
    long edge_length(int e) const;

    // Leaves in the component of dst(e) after removing the open edge e.
    std::vector<size_t> ball_of_edge(int e) const;

    // Locate a type-II point on the tree.
    struct Location {
        bool on_vertex = false;
        int vertex = -1;
        int edge = -1; // directed edge whose interior (or leaf ray) holds the point
    };
    std::optional<Location> locate(const TreePoint& a) const;

    // Disjoint edge cover of L refined `depth` times from the base vertex.
    int base_vertex() const; // interior node of minimal key; -1 when none
    std::vector<int> cover_at_depth(int depth) const;
    int max_cover_depth() const;

    size_t leaf_node(size_t leaf_index) const { return leaf_nodes_[leaf_index]; }

    std::string to_dot() const;

    friend FiniteTree build_tree(long prime, std::vector<ProjPoint> L);

private:
    void add_adj();

    long prime_ = 0;
    std::vector<ProjPoint> leaves_;
    std::vector<Node> nodes_;
    std::vector<EdgeRec> edges_; // 2 per undirected edge, opposite = ^1
    std::vector<std::vector<int>> adj_;
    std::vector<size_t> leaf_nodes_;
};

// Deduplicates, sorts canonically, and builds the minimal model by
// incremental leaf insertion through the retraction.
FiniteTree build_tree(long prime, std::vector<ProjPoint> L);

// Position of a point of A_{z1,z2} along the apartment, increasing toward z2.
long apartment_position(const TreePoint& q, const ProjPoint& z1, const ProjPoint& z2);

// Signed length of the apartment intersection A_{a1,a2} and A_{z1,z2};
// positive when the traversals a1->a2 and z1->z2 agree on the overlap.
long apartment_pairing(const ProjPoint& a1, const ProjPoint& a2, const ProjPoint& z1,
                       const ProjPoint& z2);

} // namespace padicjac
