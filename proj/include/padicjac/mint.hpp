#pragma once

#include "padicjac/graph.hpp"

namespace padicjac {

struct DivisorTerm {
    ProjPoint point;
    long mult = 0;
};
// Degree-zero divisor on P^1 (multiplicities must sum to 0).
using Divisor = std::vector<DivisorTerm>;

void check_degree_zero(const Divisor& D);

// f_D(q) normalized by f_D(b0) = 1: the product of (q - p_i)^{m_i} over the
// support, factors containing an infinite point dropped.
Padic evaluate_fD(const Divisor& D, const ProjPoint& q, const ProjPoint& b0);

// Riemann-type multiplicative integral of f_D against the harmonic cochain c
// over the depth-n disjoint edge cover of the leaf set. depth < 0 saturates
// the cover (one ball per leaf), which is exact for the finite leaf set.
Padic riemann_integral(const FiniteTree& T, const Cochain& c, const Divisor& D, int depth = -1);

// Exact valuation of the integral: retract the divisor onto the tree and sum
// length * cochain along the resulting paths. No products are evaluated.
long valuation_of_integral(const FiniteTree& T, const Cochain& c, const Divisor& D);

// mu-tilde of a rational function given by its zero/pole divisor; every
// support point must coincide with a leaf of T.
Cochain mu_tilde_rational(const FiniteTree& T, const Divisor& zeros_poles);

// Both sides of the Poisson formula u(z)/u(z0) = MI_{z-z0} d mu(u).
struct PoissonPair {
    Padic direct;
    Padic integral;
};
PoissonPair poisson_check(const FiniteTree& T, const Divisor& u, const ProjPoint& z,
                          const ProjPoint& z0, int depth = -1);

} // namespace padicjac
