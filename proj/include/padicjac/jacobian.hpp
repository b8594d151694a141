#pragma once

#include "padicjac/theta.hpp"

namespace padicjac {

// Period matrix Q with its valuation Gram matrix M = v(Q); the lattice
// Lambda is generated by the columns of Q.
struct PeriodMatrix {
    long prime = 0;
    int g = 0;
    std::vector<std::vector<Padic>> Q;
    std::vector<std::vector<long>> gram;
    long digits = 0;
};

// Point of (K*)^g.
struct TorusPoint {
    std::vector<Padic> coords;
};

// Computes Q from theta automorphy factors; enforces symmetry to certified
// digits, gram = graph pairing, and positive definiteness.
PeriodMatrix period_matrix(const SchottkyGroup& G, const ThetaOptions& opt);

// Abel-Jacobi coordinates MI_{z - z0} d mu_{gamma_j}, j = 1..g, via theta
// quotients.
TorusPoint abel_jacobi(const SchottkyGroup& G, const ProjPoint& z, const ProjPoint& z0,
                       const ThetaOptions& opt);

// AJ of a degree-zero divisor of curve points (lifts).
TorusPoint aj_divisor(const SchottkyGroup& G, const std::vector<std::pair<ProjPoint, long>>& D,
                      const ProjPoint& z0, const ThetaOptions& opt);

// Babai rounding in the valuation lattice; returns the representative in the
// fundamental Gram cell and the integer vector n with rep = t * Q^{-n}.
std::pair<TorusPoint, std::vector<long>> reduce_mod_lattice(const PeriodMatrix& P,
                                                            const TorusPoint& t);

// Exact lattice membership of the valuation vector plus unit agreement to
// `digits` p-adic digits.
bool equal_mod_lattice(const PeriodMatrix& P, const TorusPoint& t1, const TorusPoint& t2,
                       long digits);

} // namespace padicjac
