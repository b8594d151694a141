#include "padicjac/schottky.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace padicjac {

GroupWord::GroupWord(std::vector<int> letters) {
    for (int l : letters) {
        if (l == 0) fail("IdentityWord", "zero letter");
        if (!letters_.empty() && letters_.back() == -l)
            letters_.pop_back();
        else
            letters_.push_back(l);
    }
}

GroupWord GroupWord::operator*(const GroupWord& o) const {
    std::vector<int> ls = letters_;
    ls.insert(ls.end(), o.letters_.begin(), o.letters_.end());
    return GroupWord(ls);
}

GroupWord GroupWord::inverse() const {
    std::vector<int> ls(letters_.rbegin(), letters_.rend());
    for (int& l : ls) l = -l;
    GroupWord w;
    w.letters_ = ls; // already reduced
    return w;
}

std::string GroupWord::to_string() const {
    if (letters_.empty()) return "1";
    std::ostringstream os;
    for (size_t i = 0; i < letters_.size(); ++i) {
        if (i) os << "*";
        os << "g" << std::abs(letters_[i]);
        if (letters_[i] < 0) os << "^-1";
    }
    return os.str();
}

std::vector<GroupWord> enumerate_words(int g, int N) {
    // letter order g1 < g1^-1 < g2 < g2^-1 < ...
    std::vector<int> alphabet;
    for (int i = 1; i <= g; ++i) {
        alphabet.push_back(i);
        alphabet.push_back(-i);
    }
    std::vector<GroupWord> out;
    std::vector<std::vector<int>> frontier{{}};
    out.push_back(GroupWord());
    for (int len = 1; len <= N; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& w : frontier) {
            for (int l : alphabet) {
                if (!w.empty() && w.back() == -l) continue;
                auto w2 = w;
                w2.push_back(l);
                next.push_back(w2);
            }
        }
        for (auto& w : next) {
            GroupWord gw;
            gw = GroupWord(w);
            out.push_back(gw);
        }
        frontier = std::move(next);
    }
    return out;
}

FixedData analyze_element(const Moebius& m) {
    long p = m.prime();
    long prec = m.prec();
    BigInt t = m.trace();
    BigInt det = m.det();
    if (t == 0) fail("NotHyperbolic", "trace zero: eigenvalues of equal absolute value");
    long vt = vp(t, p), vd = vp(det, p);
    if (2 * vt >= vd)
        fail("NotHyperbolic", "eigenvalues have equal absolute value (2 v(tr) >= v(det))");
    long ell = vd - 2 * vt;

    FixedData fd;
    fd.translation_length = ell;
    if (m.b() == 0 && m.c() == 0) {
        // diagonal: fixed points 0 and infinity, eigenvalues a (for inf), d (for 0)
        long va = vp(m.a(), p), vdd = vp(m.d(), p);
        ProjPoint zero = ProjPoint::from_rational(p, BigRat(0), prec);
        ProjPoint inf = ProjPoint::infinity(p, prec);
        if (va < vdd) {
            fd.attractive = inf;
            fd.repulsive = zero;
        } else {
            fd.attractive = zero;
            fd.repulsive = inf;
        }
        return fd;
    }

    Padic tr = Padic::from_integer(p, t, prec);
    Padic disc = Padic::from_integer(p, t * t - 4 * det, prec);
    Padic r = disc.sqrt();
    Padic two = Padic::from_integer(p, 2, prec);
    Padic l1 = (tr + r) / two;
    Padic l2 = (tr - r) / two;
    // order: l_small has valuation v(t), l_big has v(det) - v(t)
    if (l1.is_zero() || l2.is_zero() || l1.valuation() > l2.valuation()) std::swap(l1, l2);

    auto eigpoint = [&](const Padic& lam) {
        // eigenvector (b, lam - a) if usable, else (lam - d, c)
        Padic a = Padic::from_integer(p, m.a(), prec);
        Padic d = Padic::from_integer(p, m.d(), prec);
        if (m.b() != 0) {
            Padic w1 = lam - a;
            if (w1.is_zero()) return ProjPoint::infinity(p, prec);
            return ProjPoint::finite(Padic::from_integer(p, m.b(), prec) / w1);
        }
        Padic w0 = lam - d;
        if (w0.is_zero()) return ProjPoint::finite(Padic::zero(p));
        return ProjPoint::finite(w0 / Padic::from_integer(p, m.c(), prec));
    };
    fd.attractive = eigpoint(l1);
    fd.repulsive = eigpoint(l2);
    return fd;
}

namespace {

// Disk of P^1 with a (possibly irrational) p-adic center: a closed ball
// {v(z-c) >= m}, or the closed complement {v(z-c) <= m} u {inf}.
struct Disk {
    bool with_inf = false;
    Padic center;
    long m = 0;
};

Disk ball_at(const ProjPoint& x, long k, long prime) {
    if (x.is_infinity()) return Disk{true, Padic::zero(prime), -k};
    return Disk{false, x.value(), k};
}

// p-adic balls are clopen, so the interior of a disk is the disk itself and
// the complement of the interior is the plain complement.
Disk complement_of_interior(const Disk& D) {
    if (D.with_inf) return Disk{false, D.center, D.m + 1};
    return Disk{true, D.center, D.m - 1};
}

long vdiff_pp(const Padic& a, const Padic& b) {
    Padic d = a - b;
    if (d.is_zero()) return kValInf;
    return d.valuation();
}

Disk disk_image(const Moebius& g, const Disk& D) {
    long p = g.prime();
    long prec = g.prec();
    long vdet = vp(g.det(), p);
    if (!D.with_inf) {
        if (g.c() == 0) {
            long shift = vp(g.a(), p) - vp(g.d(), p);
            Padic c2 = (Padic::from_integer(p, g.a(), prec) * D.center +
                        Padic::from_integer(p, g.b(), prec)) /
                       Padic::from_integer(p, g.d(), prec);
            return Disk{false, c2, D.m + shift};
        }
        long vc = vp(g.c(), p);
        Padic pole = Padic::from_rational(p, -g.d(), g.c(), prec);
        long vpc = vdiff_pp(pole, D.center);
        if (vpc >= D.m) {
            Padic ginf = Padic::from_rational(p, g.a(), g.c(), prec);
            return Disk{true, ginf, vdet - 2 * vc - D.m};
        }
        Padic den = Padic::from_integer(p, g.c(), prec) * D.center +
                    Padic::from_integer(p, g.d(), prec);
        Padic c2 = (Padic::from_integer(p, g.a(), prec) * D.center +
                    Padic::from_integer(p, g.b(), prec)) /
                   den;
        return Disk{false, c2, vdet + D.m - 2 * vc - 2 * vpc};
    }
    Disk comp{false, D.center, D.m + 1};
    Disk img = disk_image(g, comp);
    if (img.with_inf) return Disk{false, img.center, img.m + 1};
    return Disk{true, img.center, img.m - 1};
}

bool disk_subset(const Disk& A, const Disk& B) {
    long v = vdiff_pp(A.center, B.center);
    if (!A.with_inf && !B.with_inf) return A.m >= B.m && v >= B.m;
    if (!A.with_inf && B.with_inf) return v < A.m && v <= B.m;
    if (A.with_inf && B.with_inf) return B.m >= A.m && v > A.m;
    return false; // inf-disk inside a bounded ball
}

bool disk_disjoint(const Disk& A, const Disk& B) {
    long v = vdiff_pp(A.center, B.center);
    if (!A.with_inf && !B.with_inf) return v < std::min(A.m, B.m);
    if (A.with_inf && B.with_inf) return false;
    const Disk& n = A.with_inf ? B : A;
    const Disk& i = A.with_inf ? A : B;
    return n.m >= i.m + 1 && v >= i.m + 1;
}

} // namespace

SchottkyGroup::SchottkyGroup(long prime, long prec, std::vector<Moebius> generators)
    : prime_(prime), prec_(prec), gens_(std::move(generators)) {
    if (prime_ == 2) fail("EvenPrimeUnsupported", "p = 2 is not supported");
    if (gens_.empty()) fail("DegenerateConfiguration", "at least one generator required");
    for (const auto& g : gens_) fixed_.push_back(analyze_element(g));
    cert_ = find_ping_pong();
}

long SchottkyGroup::max_translation_length() const {
    long m = 0;
    for (const auto& f : fixed_) m = std::max(m, f.translation_length);
    return m;
}

PingPongCertificate SchottkyGroup::find_ping_pong() const {
    int g = genus();
    // feasible (k+, k-) per generator: gamma maps the closed complement of the
    // open repulsive ball into the attractive ball, and inversely.
    std::vector<std::vector<std::pair<long, long>>> feas(g);
    for (int i = 0; i < g; ++i) {
        long ell = fixed_[i].translation_length;
        for (long kp = 1; kp <= ell; ++kp) {
            for (long km = 1; km <= ell; ++km) {
                Disk Bp = ball_at(fixed_[i].attractive, kp, prime_);
                Disk Bm = ball_at(fixed_[i].repulsive, km, prime_);
                Disk out_m = complement_of_interior(Bm);
                Disk out_p = complement_of_interior(Bp);
                if (disk_subset(disk_image(gens_[i], out_m), Bp) &&
                    disk_subset(disk_image(gens_[i].inverse(), out_p), Bm))
                    feas[i].push_back({kp, km});
            }
        }
        if (feas[i].empty())
            fail("NoPingPongCertificate",
                 "no ball radii work for generator " + std::to_string(i + 1));
    }
    // first combination with pairwise disjoint balls, lexicographic order
    std::vector<size_t> pick(g, 0);
    long tried = 0;
    while (true) {
        std::vector<Disk> balls;
        PingPongCertificate cert;
        for (int i = 0; i < g; ++i) {
            auto [kp, km] = feas[i][pick[i]];
            balls.push_back(ball_at(fixed_[i].attractive, kp, prime_));
            cert.balls.push_back({fixed_[i].attractive, kp});
        }
        for (int i = 0; i < g; ++i) {
            auto [kp, km] = feas[i][pick[i]];
            balls.push_back(ball_at(fixed_[i].repulsive, km, prime_));
            cert.balls.push_back({fixed_[i].repulsive, km});
        }
        bool ok = true;
        for (size_t a = 0; a < balls.size() && ok; ++a)
            for (size_t b = a + 1; b < balls.size() && ok; ++b)
                if (!disk_disjoint(balls[a], balls[b])) ok = false;
        if (ok) return cert;
        // odometer
        int i = g - 1;
        while (i >= 0) {
            if (++pick[i] < feas[i].size()) break;
            pick[i] = 0;
            --i;
        }
        if (i < 0 || ++tried > 100000)
            fail("NoPingPongCertificate", "no disjoint ball family found");
    }
}

Moebius SchottkyGroup::word_matrix(const GroupWord& w) const {
    Moebius m = Moebius::identity(prime_, prec_);
    for (int l : w.letters()) {
        const Moebius& gl = gens_[std::abs(l) - 1];
        m = m * (l > 0 ? gl : gl.inverse());
    }
    return m;
}

const std::vector<WordMat>& SchottkyGroup::word_table(int N) const {
    if (N <= wtable_len_) return wtable_;
    std::vector<int> alphabet;
    for (int i = 1; i <= genus(); ++i) {
        alphabet.push_back(i);
        alphabet.push_back(-i);
    }
    wtable_.clear();
    wtable_.push_back({GroupWord(), Moebius::identity(prime_, prec_)});
    size_t lo = 0, hi = 1;
    for (int len = 1; len <= N; ++len) {
        for (size_t k = lo; k < hi; ++k) {
            for (int l : alphabet) {
                const auto& ls = wtable_[k].word.letters();
                if (!ls.empty() && ls.back() == -l) continue;
                std::vector<int> ext = ls;
                ext.push_back(l);
                const Moebius& gl = gens_[std::abs(l) - 1];
                Moebius m = wtable_[k].mat * (l > 0 ? gl : gl.inverse());
                wtable_.push_back({GroupWord(ext), std::move(m)});
            }
        }
        lo = hi;
        hi = wtable_.size();
    }
    wtable_len_ = N;
    return wtable_;
}

std::vector<ProjPoint> SchottkyGroup::limit_set(int N) const {
    auto it = lcache_.find(N);
    if (it != lcache_.end()) return it->second;
    std::vector<ProjPoint> base;
    for (const auto& f : fixed_) {
        base.push_back(f.attractive);
        base.push_back(f.repulsive);
    }
    std::vector<ProjPoint> out;
    for (const auto& w : enumerate_words(genus(), N)) {
        Moebius m = word_matrix(w);
        for (const auto& z : base) {
            ProjPoint y = m.act(z);
            bool dup = false;
            for (const auto& u : out)
                if (u.eq(y)) dup = true;
            if (!dup) out.push_back(y);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ProjPoint& a, const ProjPoint& b) { return a.sort_key() < b.sort_key(); });
    lcache_[N] = out;
    return out;
}

const FiniteTree& SchottkyGroup::tree(int N) const {
    auto it = tcache_.find(N);
    if (it == tcache_.end()) {
        auto T = std::make_shared<FiniteTree>(build_tree(prime_, limit_set(N)));
        it = tcache_.emplace(N, std::move(T)).first;
    }
    return *it->second;
}

namespace {

std::string unit_edge_key(const TreePoint& u, const TreePoint& v) {
    return u.key() + "|" + v.key();
}

} // namespace

namespace {

// The closed tree-point ball lies inside the certificate ball.
bool tree_point_in_ball(const TreePoint& x, const PingPongBall& B) {
    if (B.center.is_infinity()) {
        // {v(z) <= -k} u {inf}
        if (x.center() == 0) return false;
        long vc = vp(x.center(), x.prime());
        return vc <= -B.radius_exp && x.m() > vc;
    }
    return x.m() >= B.radius_exp &&
           vdiff(x.prime(), x.center(), B.center.value()) >= B.radius_exp;
}

} // namespace

int QuotientGraphData::lookup_unit_edge(const TreePoint& u, const TreePoint& v) const {
    TreePoint a = u, b = v;
    for (int iter = 0; iter < 4096; ++iter) {
        auto it = unit_edge_to_qedge.find(unit_edge_key(a, b));
        if (it != unit_edge_to_qedge.end()) return it->second;
        int ball = -1;
        for (size_t i = 0; i < cert_balls.size(); ++i) {
            if (tree_point_in_ball(a, cert_balls[i]) && tree_point_in_ball(b, cert_balls[i])) {
                ball = static_cast<int>(i);
                break;
            }
        }
        if (ball < 0) break; // already in the fundamental region
        a = moebius_act_tree(letters[ball], a);
        b = moebius_act_tree(letters[ball], b);
    }
    for (const auto& w : window_words) {
        TreePoint wa = moebius_act_tree(w, a);
        TreePoint wb = moebius_act_tree(w, b);
        auto it = unit_edge_to_qedge.find(unit_edge_key(wa, wb));
        if (it != unit_edge_to_qedge.end()) return it->second;
    }
    return -1;
}

QuotientGraphData SchottkyGroup::build_quotient_raw(int N) const {
    long R = 2 * max_translation_length() + 2;
    for (int attempt = 0; attempt < 3; ++attempt) {
        try {
            return build_quotient_inner(N, R);
        } catch (const math_error& e) {
            std::string kind = e.kind();
            if (kind == "PrecisionExhausted")
                fail("NotStabilized",
                     "fundamental domain is unbounded at depth " + std::to_string(N) +
                         "; increase N");
            if (kind != "WindowTooSmall") throw;
            R *= 2;
        }
    }
    fail("NotStabilized",
         "fundamental domain did not fit the window at depth " + std::to_string(N) +
             "; increase N");
}

QuotientGraphData SchottkyGroup::build_quotient_inner(int N, long window_radius) const {
    if (genus() >= 2 && N < 1)
        fail("DegenerateConfiguration", "depth N >= 1 required for genus >= 2");
    std::vector<ProjPoint> L = limit_set(N);
    if (L.size() < 2) fail("DegenerateConfiguration", "limit set approximation too small");

    bool has_inf = false;
    std::vector<const ProjPoint*> fin;
    for (const auto& y : L) {
        if (y.is_infinity())
            has_inf = true;
        else
            fin.push_back(&y);
    }

    // base vertex: the median of three generator fixed points sits centrally
    // between the axes (for g = 1, the axis point nearest the Gauss point)
    TreePoint v0;
    if (genus() == 1) {
        TreePoint gauss = TreePoint::make(prime_, BigRat(0), 0);
        v0 = proj_onto_apartment(gauss, fixed_[0].repulsive, fixed_[0].attractive);
    } else {
        v0 = median(fixed_[0].attractive, fixed_[0].repulsive, fixed_[1].attractive);
    }

    // window: BT vertices of T_K(L) within window_radius of v0
    auto on_tree_neighbors = [&](const TreePoint& b) {
        std::vector<TreePoint> out;
        std::set<std::string> seen;
        bool leaf_outside_parent = false;
        for (const auto* y : fin) {
            long v = vdiff(prime_, b.center(), y->value());
            if (v >= b.m()) {
                TreePoint ch = TreePoint::from_padic_center(y->value(), b.m() + 1);
                if (seen.insert(ch.key()).second) out.push_back(ch);
            } else if (v < b.m() - 1) {
                leaf_outside_parent = true;
            }
        }
        if (has_inf || leaf_outside_parent)
            out.push_back(TreePoint::make(prime_, b.center(), b.m() - 1));
        return out;
    };

    std::vector<TreePoint> verts{v0};
    std::unordered_map<std::string, int> vid{{v0.key(), 0}};
    std::vector<long> dist0{0};
    for (size_t head = 0; head < verts.size(); ++head) {
        TreePoint b = verts[head];
        long d = dist0[head];
        if (d >= window_radius) continue;
        for (const auto& nb : on_tree_neighbors(b)) {
            if (vid.count(nb.key())) continue;
            vid.emplace(nb.key(), static_cast<int>(verts.size()));
            verts.push_back(nb);
            dist0.push_back(d + 1);
        }
    }

    // Words of length <= 2N whose v0-translate lands within 2R: only these
    // can cut the Dirichlet cell or map window points back into it. The
    // enumeration prunes branches whose translate has already drifted past
    // 2R by more than two further letters could recover.
    struct NearWord {
        GroupWord word;
        Moebius mat;
        TreePoint tv0;
        long dist;
    };
    std::vector<NearWord> near;
    long maxl = max_translation_length();
    long keep_r = 2 * window_radius;
    long expand_r = keep_r + 4 * maxl;
    {
        std::vector<NearWord> frontier{{GroupWord(), Moebius::identity(prime_, prec_), v0, 0}};
        for (int len = 1; len <= 2 * N; ++len) {
            std::vector<NearWord> next;
            for (const auto& f : frontier) {
                for (int l = -genus(); l <= genus(); ++l) {
                    if (l == 0) continue;
                    const auto& ls = f.word.letters();
                    if (!ls.empty() && ls.back() == -l) continue;
                    std::vector<int> ext = ls;
                    ext.push_back(l);
                    const Moebius& gl = gens_[std::abs(l) - 1];
                    Moebius m = f.mat * (l > 0 ? gl : gl.inverse());
                    TreePoint t = moebius_act_tree(m, v0);
                    long d = tree_distance(t, v0);
                    NearWord nw{GroupWord(ext), std::move(m), t, d};
                    if (d <= keep_r) near.push_back(nw);
                    if (d <= expand_r) next.push_back(std::move(nw));
                }
            }
            frontier = std::move(next);
        }
    }
    std::stable_sort(near.begin(), near.end(),
                     [](const NearWord& a, const NearWord& b) { return a.dist < b.dist; });

    // Dirichlet cell (ties kept)
    std::vector<int> cell;
    for (size_t i = 0; i < verts.size(); ++i) {
        long d = tree_distance(verts[i], v0);
        bool keep = true;
        for (const auto& t : near) {
            if (t.dist > 2 * d) break;
            if (tree_distance(verts[i], t.tv0) < d) {
                keep = false;
                break;
            }
        }
        if (keep) cell.push_back(static_cast<int>(i));
    }
    for (int i : cell)
        if (dist0[i] >= window_radius - 1) fail("WindowTooSmall", "cell touches window boundary");

    // canonical representative of each cell orbit
    std::set<std::string> cellset;
    for (int i : cell) cellset.insert(verts[i].key());
    auto vert_sortkey = [&](const TreePoint& t) {
        long d = tree_distance(t, v0);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%08ld|", d);
        return std::string(buf) + t.key();
    };
    std::unordered_map<std::string, std::string> rep_of; // cell key -> canonical orbit key
    std::unordered_map<std::string, TreePoint> point_of;
    for (int i : cell) {
        TreePoint best = verts[i];
        std::string bestk = vert_sortkey(best);
        for (const auto& nw : near) {
            TreePoint u = moebius_act_tree(nw.mat, verts[i]);
            if (u.eq(verts[i]))
                fail("FreeActionViolated", "word " + nw.word.to_string() + " fixes a tree vertex");
            if (!cellset.count(u.key())) continue;
            std::string k = vert_sortkey(u);
            if (k < bestk) {
                bestk = k;
                best = u;
            }
        }
        rep_of[verts[i].key()] = best.key();
        point_of[verts[i].key()] = verts[i];
        point_of[best.key()] = best;
    }
    // F = cell vertices that are their own representative
    std::vector<std::string> F;
    std::unordered_map<std::string, int> fidx;
    for (int i : cell) {
        const std::string k = verts[i].key();
        if (rep_of[k] == k && !fidx.count(k)) {
            fidx.emplace(k, static_cast<int>(F.size()));
            F.push_back(k);
        }
    }

    // representative of an arbitrary window vertex, resolved into F
    auto resolve = [&](const TreePoint& x) -> int {
        auto it = rep_of.find(x.key());
        if (it != rep_of.end()) return fidx.at(it->second);
        for (const auto& nw : near) {
            TreePoint u = moebius_act_tree(nw.mat, x);
            auto jt = fidx.find(u.key());
            if (jt != fidx.end()) return jt->second;
        }
        return -1;
    };

    // unit edges touching F, classed by orbit
    struct UnitEdge {
        TreePoint a, b;
    };
    auto edge_sortkey = [&](const TreePoint& a, const TreePoint& b) {
        std::string ka = vert_sortkey(a), kb = vert_sortkey(b);
        return ka < kb ? ka + "#" + kb : kb + "#" + ka;
    };
    std::vector<UnitEdge> touching;
    std::set<std::string> touched;
    for (const std::string& k : F) {
        const TreePoint& u = point_of.at(k);
        for (const auto& nb : on_tree_neighbors(u)) {
            std::string ek = edge_sortkey(u, nb);
            if (touched.insert(ek).second) touching.push_back({u, nb});
        }
    }
    // orbit-canonical representative for each touching edge
    struct RepEdge {
        TreePoint a, b; // canonical direction
        int qa = -1, qb = -1;
    };
    std::vector<RepEdge> reps;
    std::set<std::string> repkeys;
    for (const auto& e : touching) {
        // candidates: images under near words that also touch the cell
        TreePoint ba = e.a, bb = e.b;
        std::string bestk = edge_sortkey(ba, bb);
        for (const auto& nw : near) {
            TreePoint ua = moebius_act_tree(nw.mat, e.a);
            TreePoint ub = moebius_act_tree(nw.mat, e.b);
            if (!cellset.count(ua.key()) && !cellset.count(ub.key())) continue;
            std::string k = edge_sortkey(ua, ub);
            if (k < bestk) {
                bestk = k;
                ba = ua;
                bb = ub;
            }
        }
        if (repkeys.insert(bestk).second) {
            // orient canonically: smaller endpoint first
            if (vert_sortkey(bb) < vert_sortkey(ba)) std::swap(ba, bb);
            RepEdge r;
            r.a = ba;
            r.b = bb;
            r.qa = resolve(ba);
            r.qb = resolve(bb);
            if (r.qa < 0 || r.qb < 0)
                fail("WindowTooSmall", "boundary edge endpoint has no representative");
            reps.push_back(r);
        }
    }

    // unit quotient graph
    int nF = static_cast<int>(F.size());
    std::vector<int> usrc, udst;
    for (const auto& r : reps) {
        usrc.push_back(r.qa);
        udst.push_back(r.qb);
    }
    size_t nU = reps.size();
    std::vector<std::vector<int>> uadj(nF); // directed unit edge ids: 2k (a->b), 2k+1
    for (size_t k = 0; k < nU; ++k) {
        uadj[usrc[k]].push_back(static_cast<int>(2 * k));
        uadj[udst[k]].push_back(static_cast<int>(2 * k + 1));
    }
    auto uD = [&](int e) { return (e & 1) ? usrc[e >> 1] : udst[e >> 1]; };

    // smooth valence-2 chains into weighted edges
    std::vector<int> anchors;
    for (int v = 0; v < nF; ++v)
        if (uadj[v].size() != 2) anchors.push_back(v);
    std::vector<bool> is_anchor(nF, false);
    for (int a : anchors) is_anchor[a] = true;
    // components made only of valence-2 vertices need one anchor each
    {
        std::vector<int> comp(nF, -1);
        int nc = 0;
        for (int v = 0; v < nF; ++v) {
            if (comp[v] != -1) continue;
            std::vector<int> st{v};
            comp[v] = nc;
            bool has = false;
            int best = v;
            while (!st.empty()) {
                int u = st.back();
                st.pop_back();
                if (is_anchor[u]) has = true;
                if (F[u] < F[best]) best = u;
                for (int e : uadj[u])
                    if (comp[uD(e)] == -1) {
                        comp[uD(e)] = nc;
                        st.push_back(uD(e));
                    }
            }
            if (!has) {
                is_anchor[best] = true;
                anchors.push_back(best);
            }
            ++nc;
        }
        if (nc != 1) fail("NotStabilized", "quotient graph is not connected");
    }

    QuotientGraphData Q;
    Q.depth = N;
    Q.v0 = v0;
    // cert ball i (attractive of gen i) is undone by gen_i^-1, ball i+g by gen_i
    Q.cert_balls = cert_.balls;
    for (int i = 0; i < genus(); ++i) Q.letters.push_back(gens_[i].inverse());
    for (int i = 0; i < genus(); ++i) Q.letters.push_back(gens_[i]);
    for (const auto& nw : near) Q.window_words.push_back(nw.mat);
    std::vector<int> vmap(nF, -1);
    for (int a : anchors) {
        if (vmap[a] == -1) {
            vmap[a] = Q.graph.add_vertex();
            Q.vertex_rep.push_back(point_of.at(F[a]));
        }
    }
    std::vector<int> unit2long(2 * nU, -1);
    std::vector<bool> used(2 * nU, false);
    std::sort(anchors.begin(), anchors.end());
    for (int a : anchors) {
        std::vector<int> outs = uadj[a];
        std::sort(outs.begin(), outs.end());
        for (int e0 : outs) {
            if (used[e0]) continue;
            std::vector<int> chain{e0};
            int cur = uD(e0);
            int last = e0;
            while (!is_anchor[cur]) {
                int nxt = -1;
                for (int e : uadj[cur])
                    if (e != (last ^ 1)) nxt = e;
                chain.push_back(nxt);
                last = nxt;
                cur = uD(nxt);
            }
            int eq = Q.graph.add_edge(vmap[a], vmap[cur], static_cast<long>(chain.size()));
            for (int e : chain) {
                used[e] = true;
                used[e ^ 1] = true;
                unit2long[e] = eq;
                unit2long[e ^ 1] = eq ^ 1;
            }
            // representative tree edges for the two directions of the long edge
            const RepEdge& r0 = reps[chain.front() >> 1];
            if (static_cast<size_t>(Q.edge_rep.size()) < Q.graph.num_directed_edges()) {
                Q.edge_rep.resize(Q.graph.num_directed_edges());
            }
            Q.edge_rep[eq] = (chain.front() & 1) ? std::make_pair(r0.b, r0.a)
                                                 : std::make_pair(r0.a, r0.b);
            const RepEdge& r1 = reps[chain.back() >> 1];
            Q.edge_rep[eq ^ 1] = (chain.back() & 1) ? std::make_pair(r1.a, r1.b)
                                                    : std::make_pair(r1.b, r1.a);
        }
    }
    // register rep tree edges for lookups
    for (size_t k = 0; k < nU; ++k) {
        Q.unit_edge_to_qedge[unit_edge_key(reps[k].a, reps[k].b)] = unit2long[2 * k];
        Q.unit_edge_to_qedge[unit_edge_key(reps[k].b, reps[k].a)] = unit2long[2 * k + 1];
    }

    if (!Q.graph.connected()) fail("NotStabilized", "quotient graph is not connected");
    if (Q.graph.betti() != genus())
        fail("NotStabilized", "first Betti number " + std::to_string(Q.graph.betti()) +
                                  " != genus " + std::to_string(genus()));
    return Q;
}

const QuotientGraphData& SchottkyGroup::quotient(int N) const {
    auto it = qcache_.find(N);
    if (it != qcache_.end()) return it->second;
    QuotientGraphData q = build_quotient_raw(N);
    QuotientGraphData q1 = build_quotient_raw(N + 1);
    if (q.graph.canonical_form() != q1.graph.canonical_form())
        fail("NotStabilized", "quotient graph changed between depth " + std::to_string(N) +
                                  " and " + std::to_string(N + 1) + "; increase N");
    return qcache_.emplace(N, std::move(q)).first->second;
}

namespace {

// BT vertices along the path a..b, inclusive.
std::vector<TreePoint> path_unit_vertices(const TreePoint& a, const TreePoint& b) {
    TreePoint j = tree_join(a, b);
    std::vector<TreePoint> out;
    for (long m = a.m(); m >= j.m(); --m) out.push_back(TreePoint::make(a.prime(), a.center(), m));
    for (long m = j.m() + 1; m <= b.m(); ++m)
        out.push_back(TreePoint::make(b.prime(), b.center(), m));
    return out;
}

} // namespace

Cochain SchottkyGroup::cycle_of(const QuotientGraphData& Q, const GroupWord& w) const {
    if (w.is_identity()) fail("IdentityWord", "cycle of the identity word");
    Moebius m = word_matrix(w);
    FixedData fd = analyze_element(m);
    TreePoint alpha = proj_onto_apartment(Q.v0, fd.repulsive, fd.attractive);
    TreePoint walpha = moebius_act_tree(m, alpha);
    std::vector<TreePoint> path = path_unit_vertices(alpha, walpha);
    std::vector<long> acc(Q.graph.num_directed_edges(), 0);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        int eq = Q.lookup_unit_edge(path[i], path[i + 1]);
        if (eq < 0)
            fail("EdgeOutsideWindow", "axis path leaves the projection window");
        acc[eq] += 1;
    }
    Cochain c(Q.graph.num_directed_edges());
    for (size_t e = 0; e < Q.graph.num_directed_edges(); e += 2) {
        long net = acc[e] - acc[e ^ 1];
        long len = Q.graph.length(static_cast<int>(e));
        if (net % len != 0)
            fail("EdgeOutsideWindow", "axis path covers a quotient edge partially");
        c.set(static_cast<int>(e), net / len);
    }
    // boundary must vanish: the projected path is a closed loop
    if (!validate_harmonic(Q.graph, c))
        fail("EdgeOutsideWindow", "projected axis path is not a cycle");
    return c;
}

long SchottkyGroup::pairing_gamma(const QuotientGraphData& Q, const GroupWord& w1,
                                  const GroupWord& w2) const {
    if (w1.is_identity() || w2.is_identity()) fail("IdentityWord", "pairing with identity word");
    return cycle_pairing(Q.graph, cycle_of(Q, w1), cycle_of(Q, w2));
}

long SchottkyGroup::pairing_gamma(const GroupWord& w1, const GroupWord& w2) const {
    return pairing_gamma(quotient(default_depth_), w1, w2);
}

std::vector<std::vector<long>> SchottkyGroup::gram_matrix() const {
    int g = genus();
    const QuotientGraphData& Q = quotient(default_depth_);
    std::vector<Cochain> cycles;
    for (int i = 1; i <= g; ++i) cycles.push_back(cycle_of(Q, GroupWord({i})));
    std::vector<std::vector<long>> M(g, std::vector<long>(g));
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) M[i][j] = cycle_pairing(Q.graph, cycles[i], cycles[j]);
    return M;
}

Cochain SchottkyGroup::mu_gamma(const QuotientGraphData& Q, const FiniteTree& T,
                                const GroupWord& w) const {
    if (w.is_identity()) fail("IdentityWord", "mu of the identity word");
    Cochain cyc = cycle_of(Q, w);
    Cochain mu(T.num_directed_edges());
    for (size_t e = 0; e < T.num_directed_edges(); e += 2) {
        int u = T.src(static_cast<int>(e)), v = T.dst(static_cast<int>(e));
        // a unit step inside the edge, oriented with it
        int eid = static_cast<int>(e);
        if (T.nodes()[u].is_leaf && !T.nodes()[v].is_leaf) {
            eid = T.opposite(eid);
            std::swap(u, v);
        }
        TreePoint U, next;
        if (T.nodes()[u].is_leaf) {
            // two-leaf tree: the edge is a full apartment through v0
            const ProjPoint& ya = T.leaves()[T.nodes()[u].leaf_index];
            const ProjPoint& yb = T.leaves()[T.nodes()[v].leaf_index];
            U = proj_onto_apartment(Q.v0, ya, yb);
            next = unit_step_toward(U, yb);
        } else {
            U = T.nodes()[u].point;
            next = T.nodes()[v].is_leaf
                       ? unit_step_toward(U, T.leaves()[T.nodes()[v].leaf_index])
                       : unit_step(U, T.nodes()[v].point);
        }
        int eq = Q.lookup_unit_edge(U, next);
        if (eq < 0) fail("EdgeOutsideWindow", "tree edge outside the projection window");
        mu.set(eid, cyc(eq));
    }
    return mu;
}

} // namespace padicjac
