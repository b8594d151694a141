#include "padicjac/jacobian.hpp"

#include <algorithm>

namespace padicjac {

PeriodMatrix period_matrix(const SchottkyGroup& G, const ThetaOptions& opt) {
    int g = G.genus();
    PeriodMatrix P;
    P.prime = G.prime();
    P.g = g;
    P.Q.assign(g, std::vector<Padic>(g));
    P.gram.assign(g, std::vector<long>(g));
    long digits = G.prec();
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            Certified c = period_entry(G, i, j, opt);
            P.Q[i][j] = c.value;
            digits = std::min(digits, c.digits);
            if (c.value.is_zero()) fail("GramMismatch", "period entry vanishes to precision");
            P.gram[i][j] = c.value.valuation();
        }
    // symmetry to certified digits
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j) {
            long agree = P.Q[i][j].agreement_digits(P.Q[j][i]);
            digits = std::min(digits, agree);
            if (opt.requested_digits > 0 && agree < opt.requested_digits)
                fail("SymmetryViolation",
                     "Q_" + std::to_string(i) + std::to_string(j) + " and its transpose agree on " +
                         std::to_string(agree) + " digits only");
        }
    P.digits = digits;
    // gram must be the graph pairing matrix
    auto M = G.gram_matrix();
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            if (M[i][j] != P.gram[i][j])
                fail("GramMismatch", "v(Q) disagrees with the quotient-graph pairing at (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
    // positive definiteness: leading principal minors via exact integers
    for (int k = 1; k <= g; ++k) {
        std::vector<std::vector<BigRat>> A(k, std::vector<BigRat>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) A[i][j] = BigRat(P.gram[i][j]);
        BigRat det(1);
        for (int c = 0; c < k; ++c) {
            int piv = -1;
            for (int r = c; r < k; ++r)
                if (A[r][c] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) {
                det = 0;
                break;
            }
            if (piv != c) {
                std::swap(A[piv], A[c]);
                det = -det;
            }
            det *= A[c][c];
            for (int r = c + 1; r < k; ++r) {
                BigRat f = A[r][c] / A[c][c];
                for (int j = c; j < k; ++j) A[r][j] -= f * A[c][j];
            }
        }
        if (det <= 0) fail("GramMismatch", "gram matrix is not positive definite");
    }
    return P;
}

TorusPoint abel_jacobi(const SchottkyGroup& G, const ProjPoint& z, const ProjPoint& z0,
                       const ThetaOptions& opt) {
    int g = G.genus();
    TorusPoint t;
    ProjPoint p = theta_base_point(G, {z, z0});
    for (int j = 0; j < g; ++j) {
        ProjPoint gjp = G.generator(j).act(p);
        // divisor gamma_j p - p, so that the quotient is MI_{z-z0} d mu_j
        std::vector<std::pair<ProjPoint, ProjPoint>> pairs{{gjp, p}};
        t.coords.push_back(theta_quotient(G, pairs, z, z0, opt).value);
    }
    return t;
}

TorusPoint aj_divisor(const SchottkyGroup& G, const std::vector<std::pair<ProjPoint, long>>& D,
                      const ProjPoint& z0, const ThetaOptions& opt) {
    long deg = 0;
    for (const auto& [pt, m] : D) deg += m;
    if (deg != 0) fail("NotDegreeZero", "aj divisor must have degree zero");
    int g = G.genus();
    TorusPoint t;
    for (int j = 0; j < g; ++j) t.coords.push_back(Padic::one(G.prime(), G.prec()));
    for (const auto& [pt, m] : D) {
        if (m == 0) continue;
        TorusPoint a = abel_jacobi(G, pt, z0, opt);
        for (int j = 0; j < g; ++j) t.coords[j] = t.coords[j] * a.coords[j].pow(m);
    }
    return t;
}

namespace {

// Exact rational solve M x = b for a symmetric positive definite integer M.
std::vector<BigRat> solve_gram(const std::vector<std::vector<long>>& M,
                               const std::vector<BigRat>& b) {
    int n = static_cast<int>(b.size());
    std::vector<std::vector<BigRat>> A(n, std::vector<BigRat>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) A[i][j] = BigRat(M[i][j]);
        A[i][n] = b[i];
    }
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (A[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) fail("GramMismatch", "gram matrix is singular");
        std::swap(A[piv], A[c]);
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            BigRat f = A[r][c] / A[c][c];
            for (int j = c; j <= n; ++j) A[r][j] -= f * A[c][j];
        }
    }
    std::vector<BigRat> x(n);
    for (int i = 0; i < n; ++i) x[i] = A[i][n] / A[i][i];
    return x;
}

// Nearest integer with ties toward zero.
long round_tie_to_zero(const BigRat& q) {
    BigInt num = numerator(q), den = denominator(q);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt k = (2 * num + den - 1) / (2 * den);
    long r = k.convert_to<long>();
    return neg ? -r : r;
}

} // namespace

std::pair<TorusPoint, std::vector<long>> reduce_mod_lattice(const PeriodMatrix& P,
                                                            const TorusPoint& t) {
    int g = P.g;
    if (static_cast<int>(t.coords.size()) != g)
        fail("DegenerateConfiguration", "torus point has wrong dimension");
    std::vector<BigRat> v(g);
    for (int i = 0; i < g; ++i) {
        if (t.coords[i].is_zero())
            fail("DegenerateConfiguration", "torus point coordinate vanishes to precision");
        v[i] = BigRat(t.coords[i].valuation());
    }
    std::vector<BigRat> x = solve_gram(P.gram, v);
    std::vector<long> n(g);
    for (int i = 0; i < g; ++i) n[i] = round_tie_to_zero(x[i]);
    TorusPoint rep;
    for (int i = 0; i < g; ++i) {
        Padic c = t.coords[i];
        for (int j = 0; j < g; ++j)
            if (n[j] != 0) c = c * P.Q[i][j].pow(-n[j]);
        rep.coords.push_back(c);
    }
    return {rep, n};
}

bool equal_mod_lattice(const PeriodMatrix& P, const TorusPoint& t1, const TorusPoint& t2,
                       long digits) {
    int g = P.g;
    std::vector<BigRat> d(g);
    for (int i = 0; i < g; ++i) {
        if (t1.coords[i].is_zero() || t2.coords[i].is_zero())
            fail("DegenerateConfiguration", "torus point coordinate vanishes to precision");
        d[i] = BigRat(t1.coords[i].valuation() - t2.coords[i].valuation());
    }
    std::vector<BigRat> x = solve_gram(P.gram, d);
    std::vector<long> n(g);
    for (int i = 0; i < g; ++i) {
        if (denominator(x[i]) != 1) return false; // valuation vector not in M Z^g
        n[i] = numerator(x[i]).convert_to<long>();
    }
    for (int i = 0; i < g; ++i) {
        Padic u = t1.coords[i] / t2.coords[i];
        for (int j = 0; j < g; ++j)
            if (n[j] != 0) u = u * P.Q[i][j].pow(-n[j]);
        if (u.is_zero() || u.valuation() != 0) return false;
        Padic one = Padic::one(P.prime, u.precision());
        if (u.agreement_digits(one) < std::min(digits, u.precision())) return false;
    }
    return true;
}

} // namespace padicjac
