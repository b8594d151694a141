#include "padicjac/theta.hpp"

namespace padicjac {

namespace {

// One cross-ratio grouped term; factors with an infinite point drop out.
Padic term_factor(const ProjPoint& x, const ProjPoint& y, long prec) {
    if (x.is_infinity() || y.is_infinity()) return Padic::one(x.prime(), prec);
    Padic d = x.value() - y.value();
    if (d.is_zero()) fail("PoleHit", "theta factor vanishes to precision");
    return d;
}

} // namespace

Certified theta_quotient(const SchottkyGroup& G,
                         const std::vector<std::pair<ProjPoint, ProjPoint>>& pairs,
                         const ProjPoint& z, const ProjPoint& w, const ThetaOptions& opt) {
    long prec = G.prec();
    Certified out;
    out.value = Padic::one(G.prime(), prec);
    out.digits = prec;
    if (z.eq(w)) return out;
    std::vector<std::pair<ProjPoint, ProjPoint>> eff;
    for (const auto& pq : pairs)
        if (!pq.first.eq(pq.second)) eff.push_back(pq);
    if (eff.empty()) return out;

    const auto& table = G.word_table(opt.trunc_cap);
    Padic acc = Padic::one(G.prime(), prec);
    Padic prev = acc;
    long digits = -1;
    size_t idx = 0;
    for (int len = 0; len <= opt.trunc_cap; ++len) {
        bool any = false;
        while (idx < table.size() && static_cast<long>(table[idx].word.length()) == len) {
            const Moebius& m = table[idx].mat;
            for (const auto& pq : eff) {
                ProjPoint gp = m.act(pq.first);
                ProjPoint gq = m.act(pq.second);
                Padic num = term_factor(z, gp, prec) * term_factor(w, gq, prec);
                Padic den = term_factor(z, gq, prec) * term_factor(w, gp, prec);
                acc = acc * (num / den);
            }
            ++idx;
            any = true;
        }
        if (!any) break;
        if (len >= 1) {
            digits = acc.agreement_digits(prev);
            if (opt.requested_digits > 0 && digits >= opt.requested_digits) {
                prev = acc;
                break;
            }
        }
        prev = acc;
    }
    out.value = acc;
    out.digits = std::min(digits < 0 ? prec : digits, acc.is_zero() ? 0L : acc.precision());
    if (opt.requested_digits > 0 && out.digits < opt.requested_digits)
        fail("NotConverged", "theta truncation cap reached at " + std::to_string(out.digits) +
                                 " certified digits (requested " +
                                 std::to_string(opt.requested_digits) + ")");
    return out;
}

bool in_ping_pong_ball(const SchottkyGroup& G, const ProjPoint& x) {
    for (const auto& b : G.certificate().balls) {
        if (b.center.is_infinity()) {
            if (x.is_infinity()) return true;
            if (!x.value().is_zero() && x.value().valuation() <= -b.radius_exp) return true;
        } else {
            if (x.is_infinity()) continue;
            Padic d = x.value() - b.center.value();
            if (d.is_zero() || d.valuation() >= b.radius_exp) return true;
        }
    }
    return false;
}

namespace {

std::vector<BigRat> candidate_stream(int count) {
    std::vector<BigRat> out;
    for (long den = 1; den <= 4 && static_cast<int>(out.size()) < count; ++den) {
        for (long num = 0; num <= 40 && static_cast<int>(out.size()) < count; ++num) {
            for (long s : {1L, -1L}) {
                if (num == 0 && s == -1) continue;
                if (gcd(BigInt(num), BigInt(den)) != 1 && num != 0) continue;
                if (num == 0 && den != 1) continue;
                out.push_back(make_rat(s * num, den));
            }
        }
    }
    return out;
}

bool near_orbit(const SchottkyGroup& G, const ProjPoint& x, const std::vector<ProjPoint>& pts,
                int word_len) {
    const auto& table = G.word_table(word_len);
    for (const auto& wm : table) {
        if (static_cast<long>(wm.word.length()) > word_len) break;
        for (const auto& a : pts) {
            if (x.eq(wm.mat.act(a))) return true;
        }
    }
    return false;
}

} // namespace

namespace {

// Too close to the resolution window of the limit set: within three digits
// past the deepest certificate ball of some approximate limit point.
bool in_limit_window(const SchottkyGroup& G, const ProjPoint& x) {
    long cut = 1;
    for (const auto& b : G.certificate().balls) cut = std::max(cut, b.radius_exp);
    cut += 3;
    for (const auto& y : G.limit_set(2)) {
        if (y.is_infinity()) {
            if (x.is_infinity()) return true;
            if (!x.value().is_zero() && x.value().valuation() <= -cut) return true;
            continue;
        }
        if (x.is_infinity()) continue;
        Padic d = x.value() - y.value();
        if (d.is_zero() || d.valuation() >= cut) return true;
    }
    return false;
}

// First pass: candidates outside every ping-pong ball. When the balls cover
// all of P^1(Q_p) (possible once the residue directions fill up), fall back
// to candidates merely off the limit-set window.
ProjPoint pick_point(const SchottkyGroup& G, const std::vector<ProjPoint>& avoid,
                     const std::vector<ProjPoint>& block) {
    for (int relax = 0; relax < 2; ++relax) {
        for (const auto& c : candidate_stream(120)) {
            ProjPoint x = ProjPoint::from_rational(G.prime(), c, G.prec());
            if (relax == 0 ? in_ping_pong_ball(G, x) : in_limit_window(G, x)) continue;
            if (near_orbit(G, x, avoid, 2)) continue;
            if (near_orbit(G, x, block, 2)) continue;
            return x;
        }
    }
    fail("SampleDegenerate", "no rational base point found off the limit-set window");
}

} // namespace

ProjPoint theta_base_point(const SchottkyGroup& G, const std::vector<ProjPoint>& avoid) {
    return pick_point(G, avoid, {});
}

std::vector<ProjPoint> theta_samples(const SchottkyGroup& G, int count,
                                     const std::vector<ProjPoint>& avoid) {
    std::vector<ProjPoint> picked;
    for (int k = 0; k < count; ++k) picked.push_back(pick_point(G, avoid, picked));
    return picked;
}

Certified automorphy_factor(const SchottkyGroup& G,
                            const std::vector<std::pair<ProjPoint, ProjPoint>>& pairs,
                            const GroupWord& w, const ThetaOptions& opt) {
    if (w.is_identity()) fail("IdentityWord", "automorphy factor of the identity");
    std::vector<ProjPoint> avoid;
    for (const auto& pq : pairs) {
        avoid.push_back(pq.first);
        avoid.push_back(pq.second);
    }
    Moebius mw = G.word_matrix(w);
    std::vector<ProjPoint> samples = theta_samples(G, 4, avoid);
    std::vector<Certified> vals;
    for (const auto& z : samples) {
        if (vals.size() >= 2) break;
        try {
            vals.push_back(theta_quotient(G, pairs, z, mw.act(z), opt));
        } catch (const math_error& e) {
            if (std::string(e.kind()) != "PoleHit") throw;
        }
    }
    if (vals.size() < 2) fail("SampleDegenerate", "both automorphy samples hit poles");
    Certified out = vals[0];
    out.digits = std::min({vals[0].digits, vals[1].digits,
                           vals[0].value.agreement_digits(vals[1].value)});
    if (opt.requested_digits > 0 && out.digits < opt.requested_digits)
        fail("NotConverged",
             "automorphy factor sample agreement only " + std::to_string(out.digits) + " digits");
    return out;
}

Certified period_entry(const SchottkyGroup& G, int i, int j, const ThetaOptions& opt) {
    ProjPoint p = theta_base_point(G);
    ProjPoint gjp = G.generator(j).act(p);
    std::vector<std::pair<ProjPoint, ProjPoint>> pairs{{p, gjp}};
    return automorphy_factor(G, pairs, GroupWord({i + 1}), opt);
}

} // namespace padicjac
