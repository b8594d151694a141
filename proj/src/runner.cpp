#include "padicjac/runner.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "padicjac/jacobian.hpp"

namespace padicjac {

namespace {

SchottkyGroup make_group(const JobConfig& cfg) {
    std::vector<Moebius> gens;
    for (const auto& m : cfg.generators)
        gens.push_back(Moebius::from_rationals(cfg.prime, cfg.working_prec(), m));
    return SchottkyGroup(cfg.prime, cfg.working_prec(), gens);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

Json json_point(const ProjPoint& x) {
    if (x.is_infinity()) return Json("inf");
    return padic_to_json(x.value());
}

// user-facing values carry the configured digits; guard digits are cut
Json jp(const Padic& x, long user_prec) { return padic_to_json(x.truncated(user_prec)); }

Json torus_to_json_prec(const TorusPoint& t, long user_prec) {
    Json a = Json::array();
    for (const auto& c : t.coords) a.push_back(jp(c, user_prec));
    return a;
}

Json cmd_info(const SchottkyGroup& G, const JobConfig& cfg) {
    Json out;
    out["prime"] = cfg.prime;
    out["genus"] = G.genus();
    Json gens = Json::array();
    for (int i = 0; i < G.genus(); ++i) {
        const FixedData& f = G.fixed(i);
        Json g;
        g["matrix"] = G.generator(i).to_string();
        g["attractive"] = json_point(f.attractive);
        g["repulsive"] = json_point(f.repulsive);
        g["translationLength"] = f.translation_length;
        gens.push_back(g);
    }
    out["generators"] = gens;
    Json balls = Json::array();
    for (const auto& b : G.certificate().balls) {
        Json jb;
        jb["center"] = json_point(b.center);
        jb["radiusExp"] = b.radius_exp;
        balls.push_back(jb);
    }
    out["pingpong"] = Json{{"balls", balls}};
    return out;
}

Json cmd_graph(const SchottkyGroup& G, int depth, const RunOptions& opt) {
    const QuotientGraphData& Q = G.quotient(depth);
    Json out;
    out["vertices"] = Q.graph.num_vertices();
    Json edges = Json::array();
    for (size_t e = 0; e < Q.graph.num_directed_edges(); e += 2)
        edges.push_back(Json::array({Q.graph.src(static_cast<int>(e)),
                                     Q.graph.dst(static_cast<int>(e)),
                                     Q.graph.length(static_cast<int>(e))}));
    out["edges"] = edges;
    out["betti"] = Q.graph.betti();
    out["depth"] = depth;
    if (!opt.dot_path.empty()) {
        std::ofstream f(opt.dot_path);
        f << to_dot(Q.graph);
    }
    if (!opt.tree_dot_path.empty()) {
        std::ofstream f(opt.tree_dot_path);
        f << G.tree(depth).to_dot();
    }
    return out;
}

Json cmd_periods(const SchottkyGroup& G, const JobConfig& cfg, const ThetaOptions& topt) {
    PeriodMatrix P = period_matrix(G, topt);
    Json out;
    Json Q = Json::array();
    for (int i = 0; i < P.g; ++i) {
        Json row = Json::array();
        for (int j = 0; j < P.g; ++j) row.push_back(jp(P.Q[i][j], std::min(P.digits, cfg.precision)));
        Q.push_back(row);
    }
    out["Q"] = Q;
    out["gram"] = P.gram;
    out["digits"] = std::min(P.digits, cfg.precision);
    return out;
}

Json cmd_aj(const SchottkyGroup& G, const JobConfig& cfg, const RunOptions& opt,
            const ThetaOptions& topt) {
    if (opt.point.empty() || opt.base.empty()) throw usage_error("aj needs --point and --base");
    ProjPoint z = parse_point(cfg.prime, cfg.working_prec(), opt.point);
    ProjPoint z0 = parse_point(cfg.prime, cfg.working_prec(), opt.base);
    TorusPoint t = abel_jacobi(G, z, z0, topt);
    PeriodMatrix P = period_matrix(G, topt);
    auto [rep, n] = reduce_mod_lattice(P, t);
    Json out;
    out["aj"] = torus_to_json_prec(t, cfg.precision);
    out["reduced"] = torus_to_json_prec(rep, cfg.precision);
    out["shift"] = n;
    return out;
}

Json cmd_theta(const SchottkyGroup& G, const JobConfig& cfg, const RunOptions& opt,
               const ThetaOptions& topt) {
    if (opt.divisor.empty() || opt.at.empty()) throw usage_error("theta needs --divisor and --at");
    std::vector<std::pair<ProjPoint, ProjPoint>> pairs;
    for (const auto& item : split(opt.divisor, ';')) {
        auto pq = split(item, ':');
        if (pq.size() != 2) throw usage_error("theta divisor items are 'p:q' pairs");
        pairs.push_back({parse_point(cfg.prime, cfg.working_prec(), pq[0]),
                         parse_point(cfg.prime, cfg.working_prec(), pq[1])});
    }
    auto zw = split(opt.at, ',');
    if (zw.size() != 2) throw usage_error("theta --at takes 'z,w'");
    ProjPoint z = parse_point(cfg.prime, cfg.working_prec(), zw[0]);
    ProjPoint w = parse_point(cfg.prime, cfg.working_prec(), zw[1]);
    Certified c = theta_quotient(G, pairs, z, w, topt);
    Json out;
    out["value"] = jp(c.value, std::min(c.digits, cfg.precision));
    out["digits"] = std::min(c.digits, cfg.precision);
    return out;
}

Json cmd_integrate(const SchottkyGroup& G, const JobConfig& cfg, const RunOptions& opt,
                   const ThetaOptions& topt, int depth) {
    if (opt.divisor.empty() || opt.measure.empty())
        throw usage_error("integrate needs --divisor and --measure");
    std::vector<std::pair<ProjPoint, long>> D;
    Divisor Dm;
    for (const auto& item : split(opt.divisor, ';')) {
        auto pm = split(item, ':');
        if (pm.size() != 2) throw usage_error("integrate divisor items are 'point:mult'");
        ProjPoint pt = parse_point(cfg.prime, cfg.working_prec(), pm[0]);
        long mult = std::stol(pm[1]);
        D.push_back({pt, mult});
        Dm.push_back({pt, mult});
    }
    int j = 0;
    try {
        j = std::stoi(opt.measure);
    } catch (const std::exception&) {
        throw usage_error("integrate --measure takes a generator index (1-based)");
    }
    if (j < 1 || j > G.genus()) throw usage_error("measure index out of range");
    // fast path: theta quotients (Poisson); exact valuation via the tree
    std::vector<ProjPoint> avoid;
    for (const auto& [pt, m] : D) avoid.push_back(pt);
    TorusPoint t = aj_divisor(G, D, theta_base_point(G, avoid), topt);
    Padic value = t.coords[j - 1];
    const FiniteTree& T = G.tree(depth);
    const QuotientGraphData& Q = G.quotient(depth);
    Cochain mu = G.mu_gamma(Q, T, GroupWord({j}));
    long vex = valuation_of_integral(T, mu, Dm);
    if (!value.is_zero() && value.valuation() != vex)
        fail("GramMismatch", "theta and tree valuations disagree: " +
                                 std::to_string(value.valuation()) + " vs " + std::to_string(vex));
    Json out;
    out["value"] = jp(value, cfg.precision);
    out["valuation"] = vex;
    out["digits"] = topt.requested_digits > 0 ? topt.requested_digits : cfg.precision;
    return out;
}

Json cmd_selfcheck(const SchottkyGroup& G, const JobConfig& cfg, const ThetaOptions& topt,
                   int depth) {
    Json checks = Json::array();
    bool all = true;
    auto record = [&](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back(Json{{"name", name}, {"pass", pass}, {"detail", detail}});
        all = all && pass;
    };
    // ping-pong already verified at construction
    record("ping_pong", true, "certificate with " +
                                  std::to_string(G.certificate().balls.size()) + " balls");
    try {
        const QuotientGraphData& Q = G.quotient(depth);
        record("quotient_stabilized", true, "betti " + std::to_string(Q.graph.betti()));
    } catch (const math_error& e) {
        record("quotient_stabilized", false, e.what());
    }
    try {
        auto M = G.gram_matrix();
        bool sym = true;
        for (size_t i = 0; i < M.size(); ++i)
            for (size_t j = 0; j < M.size(); ++j) sym = sym && M[i][j] == M[j][i];
        record("gram_symmetric", sym, "");
        PeriodMatrix P = period_matrix(G, topt);
        record("period_matrix", true, "certified digits " + std::to_string(P.digits));
    } catch (const math_error& e) {
        record("period_matrix", false, e.what());
    }
    // cross ratio vs apartment pairing on a deterministic sample
    {
        std::mt19937 rng(12345);
        std::uniform_int_distribution<long> dist(-20, 20);
        bool ok = true;
        std::string detail;
        for (int trial = 0; trial < 25 && ok; ++trial) {
            long vals[4];
            for (auto& v : vals) v = dist(rng);
            if (vals[0] == vals[2] || vals[1] == vals[3] || vals[0] == vals[1] ||
                vals[0] == vals[3] || vals[1] == vals[2] || vals[2] == vals[3])
                continue;
            ProjPoint a1 = ProjPoint::from_rational(cfg.prime, BigRat(vals[0]), cfg.working_prec());
            ProjPoint z1 = ProjPoint::from_rational(cfg.prime, BigRat(vals[1]), cfg.working_prec());
            ProjPoint a2 = ProjPoint::from_rational(cfg.prime, BigRat(vals[2]), cfg.working_prec());
            ProjPoint z2 = ProjPoint::from_rational(cfg.prime, BigRat(vals[3]), cfg.working_prec());
            Padic cr = cross_ratio(a1, z1, a2, z2);
            long lhs = cr.is_zero() ? kValInf : cr.valuation();
            long rhs = apartment_pairing(a1, a2, z1, z2);
            if (lhs != rhs) {
                ok = false;
                detail = "mismatch at trial " + std::to_string(trial);
            }
        }
        record("cross_ratio_pairing", ok, detail);
    }
    // AJ well-definedness for the first generator
    try {
        PeriodMatrix P = period_matrix(G, topt);
        ProjPoint z = theta_samples(G, 3, {})[2];
        ProjPoint z0 = theta_samples(G, 3, {})[1];
        TorusPoint a = abel_jacobi(G, z, z0, topt);
        TorusPoint b = abel_jacobi(G, G.generator(0).act(z), z0, topt);
        bool ok = equal_mod_lattice(P, a, b, std::max<long>(6, topt.requested_digits / 2));
        record("aj_well_defined", ok, "");
    } catch (const math_error& e) {
        record("aj_well_defined", false, e.what());
    }
    Json out;
    out["checks"] = checks;
    out["ok"] = all;
    if (!all) fail("SelfCheckFailed", out.dump());
    return out;
}

} // namespace

Json run_command(const std::string& command, JobConfig cfg, const RunOptions& opt) {
    if (opt.depth > 0) cfg.depth = opt.depth;
    if (opt.trunc > 0) cfg.trunc = opt.trunc;
    if (opt.digits > 0) cfg.precision = opt.digits;
    SchottkyGroup G = make_group(cfg);
    G.set_default_depth(cfg.depth);
    ThetaOptions topt;
    topt.trunc_cap = cfg.trunc;
    topt.requested_digits = 0; // best effort; digits reported
    if (command == "info") return cmd_info(G, cfg);
    if (command == "graph") return cmd_graph(G, cfg.depth, opt);
    if (command == "periods") return cmd_periods(G, cfg, topt);
    if (command == "aj") return cmd_aj(G, cfg, opt, topt);
    if (command == "theta") return cmd_theta(G, cfg, opt, topt);
    if (command == "integrate") return cmd_integrate(G, cfg, opt, topt, cfg.depth);
    if (command == "selfcheck") return cmd_selfcheck(G, cfg, topt, cfg.depth);
    throw usage_error("unknown command '" + command + "'");
}

} // namespace padicjac
