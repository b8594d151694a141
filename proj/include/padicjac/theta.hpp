#pragma once

#include "padicjac/mint.hpp"
#include "padicjac/schottky.hpp"

namespace padicjac {

struct ThetaOptions {
    int trunc_cap = 16;
    long requested_digits = 0; // 0: best effort, no NotConverged
};

struct Certified {
    Padic value;
    long digits = 0;
};

// Theta quotient theta_D(z) / theta_D(w) for D = sum (p_i - q_i), evaluated
// as the truncated double product over group words, grouped in word-length
// shells; certified digits from successive-shell agreement.
Certified theta_quotient(const SchottkyGroup& G,
                         const std::vector<std::pair<ProjPoint, ProjPoint>>& pairs,
                         const ProjPoint& z, const ProjPoint& w, const ThetaOptions& opt);

// Automorphy factor c(w) with theta_D(z) = c(w) theta_D(w z), computed as the
// quotient theta_D(z)/theta_D(wz) at two deterministic sample points.
Certified automorphy_factor(const SchottkyGroup& G,
                            const std::vector<std::pair<ProjPoint, ProjPoint>>& pairs,
                            const GroupWord& w, const ThetaOptions& opt);

// Q_ij: the automorphy factor of theta(p - gamma_j p; .) at gamma_i,
// equal to MI_{gamma_i p - p} d mu_{gamma_j}.
Certified period_entry(const SchottkyGroup& G, int i, int j, const ThetaOptions& opt);

// Deterministic base point whose orbit stays off the limit-set window
// (outside every ping-pong ball), skipping the orbits of `avoid`.
ProjPoint theta_base_point(const SchottkyGroup& G, const std::vector<ProjPoint>& avoid = {});
// Deterministic evaluation samples, pairwise in distinct orbits, off the
// ping-pong balls and off the orbits of `avoid`.
std::vector<ProjPoint> theta_samples(const SchottkyGroup& G, int count,
                                     const std::vector<ProjPoint>& avoid);

bool in_ping_pong_ball(const SchottkyGroup& G, const ProjPoint& x);

} // namespace padicjac
