// ortho.cpp
// See ortho.hpp.  The construction follows its source argument verbatim:
// markers, the bounded partition, per-part least-admissible radius vectors,
// rough rectangles with surrounding blocks, and the block-membership
// signature relation.  All admissibility tests are exact rationals.

#include "nilrect/ortho.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#ifdef NILRECT_OPENMP
#include <omp.h>
#endif

namespace nilrect {

namespace {

// Symmetric closure of phi(R), deduplicated, identity included.
std::vector<GroupElement> sym_phi_closure(const Chart& c, const Rect& R, const Int& budget) {
    std::set<GroupElement> out;
    out.insert(identity(c.group));
    for (const GVec& v : enumerate(R, budget)) {
        GroupElement g = c.phi(v);
        out.insert(g);
        out.insert(invert(g));
    }
    return std::vector<GroupElement>(out.begin(), out.end());
}

std::vector<long long> xh_points(const Window& w, const std::vector<char>* xh) {
    std::vector<long long> pts;
    for (long long x = 0; x < w.num_points; ++x)
        if (!xh || (*xh)[static_cast<size_t>(x)]) pts.push_back(x);
    return pts;
}

struct Interval {
    Rat lo, hi; // open interval of forbidden values
    std::string origin;
};

// The least integer in [lo, hi] avoiding every open interval; nullopt when
// the intervals exhaust the range.
std::optional<Int> least_admissible(const Int& lo, const Int& hi, std::vector<Interval>& bans) {
    std::sort(bans.begin(), bans.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Int d = lo;
    for (const Interval& iv : bans) {
        if (Rat(d) > iv.lo && Rat(d) < iv.hi)
            d = ceil_div(numerator(iv.hi), denominator(iv.hi));
    }
    if (d > hi) return std::nullopt;
    return d;
}

std::string intervals_to_text(const std::vector<Interval>& bans) {
    std::ostringstream os;
    for (size_t k = 0; k < bans.size(); ++k) {
        if (k) os << " ";
        os << "(" << rat_str(bans[k].lo) << "," << rat_str(bans[k].hi) << ";" << bans[k].origin
           << ")";
    }
    return os.str();
}

// Block code of the offset v relative to the radius vector d: per free axis
// -1 / 0 / +1 for below / inside / above [-d_i, d_i], packed base 3.
int block_code(const GVec& v, const std::vector<Int>& d) {
    int code = 0;
    for (size_t i = 0; i < d.size(); ++i) {
        int a = v.z[i] < -d[i] ? 0 : (v.z[i] > d[i] ? 2 : 1);
        code = code * 3 + a;
    }
    return code;
}

} // namespace

Int reference_p(int ell) { return Int(1) << (14 * ell); }

Rat strict_q_bound(int ell, long long b) {
    Int den = Int(4) * 306 * ell * b * (Int(1) << (22 * ell * ell));
    return Rat(Int(1), den);
}

bool ParamReport::all_pass() const {
    for (const auto& c : checks)
        if (c.required && !c.pass) return false;
    return true;
}

std::string ParamReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "[pass" : "[FAIL") << (c.required ? "]" : "/info]") << " " << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << "\n";
    }
    os << (all_pass() ? "parameters: pass" : "parameters: FAIL") << "\n";
    return os.str();
}

ParamReport check_parameters(const Chart& c, const OrthoParams& prm) {
    ParamReport rep;
    int ell = c.ell;
    Int P = prm.strict || prm.p == 0 ? reference_p(ell) : Int(prm.p);
    Rat g2 = prm.strict ? Rat(3) : prm.guard2;
    Rat g3 = prm.strict || prm.guard3 == 0 ? Rat(64 * ell) : prm.guard3;
    const auto& a = prm.A.radius;
    const auto& z = c.zee.radius;

    // dom containment.  Strict: 2^(40 l).A inside dom.  Relaxed: the widest
    // rectangle the construction enumerates must fit (the clause scans, the
    // per-point precheck at 8p.A, and the block/signature reach, which is at
    // most min(block_mult (2p a) + 1, 6p a + 2z) per axis).
    {
        Int big = Int(1) << (40 * ell);
        Rat worst(0);
        bool ok = true;
        for (int i = 0; i < ell; ++i) {
            Int need;
            if (prm.strict) {
                need = big * a[static_cast<size_t>(i)];
            } else {
                Int ai = a[static_cast<size_t>(i)];
                Int reach1 = ceil_mul(prm.partition_mult * P, ai);
                Int reach2 = ceil_mul(prm.scan_mult * P, ai);
                Int reach3 = Int(8) * P * ai;
                Int blocks = ceil_mul(prm.block_mult * 2 * P, ai) + 1;
                Int sig = Int(6) * P * ai + 2 * z[static_cast<size_t>(i)];
                Int reach4 = blocks < sig ? blocks : sig;
                need = std::max({reach1, reach2, reach3, reach4});
            }
            Rat slack = Rat(c.dom.radius[static_cast<size_t>(i)] - need);
            if (slack < 0) ok = false;
            if (i == 0 || slack < worst) worst = slack;
        }
        rep.checks.push_back({prm.strict ? "2^(40 l) . A inside dom" : "working region inside dom",
                              ok, true, "min slack " + rat_str(worst)});
    }

    // Zee fit: 2 . 36^2 . p . Zee fits in eps . A.  Gates only in strict
    // mode; relaxed runs instead require the rough-witness minimum
    // floor(eps a_i) >= 4 z_i (the emitted-delta route needs it).
    {
        Int mult = Int(2) * 36 * 36 * P;
        bool ok = true;
        Int worst = 0;
        for (int i = 0; i < ell; ++i) {
            Int have = floor_mul(prm.eps, a[static_cast<size_t>(i)]);
            Int slack = have - mult * z[static_cast<size_t>(i)];
            if (slack < 0) ok = false;
            if (i == 0 || slack < worst) worst = slack;
        }
        rep.checks.push_back({"2 . 36^2 . p . Zee fits in eps . A", ok, prm.strict,
                              "min slack " + worst.str()});
        if (!prm.strict) {
            bool ok2 = true;
            Int worst2 = 0;
            for (int i = 0; i < ell; ++i) {
                Int slack = floor_mul(prm.eps, a[static_cast<size_t>(i)]) -
                            4 * z[static_cast<size_t>(i)];
                if (slack < 0) ok2 = false;
                if (i == 0 || slack < worst2) worst2 = slack;
            }
            rep.checks.push_back({"floor(eps a_i) >= 4 z_i (witness tolerance)", ok2, true,
                                  "min slack " + worst2.str()});
        }
    }

    // q-window, lower end.
    {
        Rat slack = prm.q - 8 * prm.eps;
        rep.checks.push_back({"8 eps < q", slack > 0, prm.strict, "slack " + rat_str(slack)});
    }

    // q-window, upper end: q < 1/(4 . 306 . l . b . 2^(22 l^2)).
    {
        Rat bound = strict_q_bound(ell, prm.b);
        rep.checks.push_back({"q < 1/(4 . 306 . l . b . 2^(22 l^2))", prm.q < bound, prm.strict,
                              "bound " + rat_str(bound) + ", slack " + rat_str(bound - prm.q)});
    }

    // Forbidden-interval budget: p a_i - 4 N1 . 7 a_i - 2 b N2 . 153 l q a_i
    // must stay positive (reference form); the relaxed analogue uses the
    // configured guards, interval widths 2 g2 a_i + 1 and
    // 2 (g3 + 12) q a_i + 1, and any declared N1/N2 overrides.
    {
        Int N1 = prm.neighbor_bound && !prm.strict ? *prm.neighbor_bound : [&] {
            Int n(1);
            for (int i = 0; i < ell; ++i) n *= 84;
            return n;
        }();
        Int N2 = prm.cluster_bound && !prm.strict ? *prm.cluster_bound
                                                  : Int(1) << (22 * ell * ell);
        bool ok = true;
        Rat worst(0);
        for (int i = 0; i < ell; ++i) {
            Rat ai(a[static_cast<size_t>(i)]);
            Rat lhs;
            if (prm.strict) {
                lhs = Rat(P) * ai - Rat(4 * N1) * 7 * ai -
                      Rat(2 * prm.b) * Rat(N2) * 153 * ell * prm.q * ai;
            } else {
                lhs = Rat(P) * ai - Rat(4 * N1) * (2 * g2 * ai + 1) -
                      Rat(2 * prm.b) * Rat(N2) * (2 * (g3 + 12) * prm.q * ai + 1);
            }
            if (lhs <= 0) ok = false;
            if (i == 0 || lhs < worst) worst = lhs;
        }
        // The budget is a disjoint-interval worst case; with desk constants
        // the intervals overlap heavily and the sweep itself is the arbiter,
        // so the check only gates in strict mode.
        rep.checks.push_back({"forbidden-interval budget p a_i - 4 N1 w2 - 2 b N2 w3 > 0", ok,
                              prm.strict, "min slack " + rat_str(worst)});
    }
    return rep;
}

OrthoResult build_orthogonal_relation(const Window& w, const Chart& c, const OrthoParams& prm,
                                      const std::vector<CertifiedRel>& existing,
                                      const std::vector<char>* xh, const Int& budget, int jobs) {
    const int ell = c.ell;
    const Int P = prm.p == 0 ? reference_p(ell) : Int(prm.p);
    const Rat Pr{P};
    const Rat g2 = prm.guard2;
    const Rat g3 = prm.guard3 == 0 ? Rat(64 * ell) : prm.guard3;
    const long long n = w.num_points;
    const std::vector<long long> XH = xh_points(w, xh);

    // Per-point precondition: at most b existing relations move phi(8p.A).x
    // out of [x].
    if (!existing.empty()) {
        Rect probe = scale(Rat(8) * Pr, prm.A);
        std::vector<long long> counts(static_cast<size_t>(n), 0);
        for (const auto& rel : existing) {
            std::vector<char> inv = box_invariant_mask(w, rel.E, c, probe, budget, jobs);
            for (long long x = 0; x < n; ++x)
                if (!inv[static_cast<size_t>(x)]) ++counts[static_cast<size_t>(x)];
        }
        for (long long x : XH)
            if (counts[static_cast<size_t>(x)] > prm.b)
                throw std::invalid_argument(
                    "orthogonalize: per-point bound violated at x=" + std::to_string(x) + " (" +
                    std::to_string(counts[static_cast<size_t>(x)]) + " > b=" +
                    std::to_string(prm.b) + ")");
    }

    OrthoResult res;

    // (1) Marker set with K = symmetric closure of phi((3p/4).A).
    std::vector<GroupElement> K =
        sym_phi_closure(c, scale(prm.marker_mult * Pr, prm.A), budget);
    res.Y = build_marker_set(w, K, XH);
    const auto& Y = res.Y.members;
    const int ny = static_cast<int>(Y.size());
    std::vector<long long> marker_index(static_cast<size_t>(n), -1);
    for (int m = 0; m < ny; ++m) marker_index[static_cast<size_t>(Y[static_cast<size_t>(m)])] = m;

    // (2) Partition of Y by the symmetric closure of phi(13p.A).
    std::vector<GroupElement> F13 =
        sym_phi_closure(c, scale(prm.partition_mult * Pr, prm.A), budget);
    res.parts = partition_marker(w, F13, Y);

    // (3) Least-admissible d_i(y), part by part.
    const Rect rect13 = scale(prm.partition_mult * Pr, prm.A);
    const Rect rect7 = scale(prm.scan_mult * Pr, prm.A);
    const std::vector<GVec> v13 = enumerate(rect13, budget);
    const std::vector<GVec> v7 = enumerate(rect7, budget);
    std::vector<GroupElement> g13, g7;
    g13.reserve(v13.size());
    for (const GVec& v : v13) g13.push_back(c.phi(v));
    g7.reserve(v7.size());
    for (const GVec& v : v7) g7.push_back(c.phi(v));

    // Boundaries of the existing relations at q.A, once per (relation, axis),
    // indexed by window point.
    std::vector<std::vector<std::vector<char>>> bnd(existing.size());
    for (size_t k = 0; k < existing.size(); ++k) {
        bnd[k].assign(static_cast<size_t>(ell), std::vector<char>(static_cast<size_t>(n), 0));
        for (int i = 1; i <= ell; ++i)
            for (long long z : boundary(w, existing[k].E, c, scale(prm.q, prm.A), i, xh, jobs))
                bnd[k][static_cast<size_t>(i - 1)][static_cast<size_t>(z)] = 1;
    }

    res.d.assign(static_cast<size_t>(ny), {});
    for (const auto& part : res.parts) {
        for (long long y : part) {
            int my = static_cast<int>(marker_index[static_cast<size_t>(y)]);
            // Assigned neighbors within phi(13p.A).y.
            std::vector<std::pair<GVec, int>> nbrs; // (u, marker index)
            for (size_t t = 0; t < v13.size(); ++t) {
                long long zp = w.act(g13[t], y);
                long long mi = marker_index[static_cast<size_t>(zp)];
                if (mi >= 0 && mi != my && !res.d[static_cast<size_t>(mi)].empty())
                    nbrs.emplace_back(v13[t], static_cast<int>(mi));
            }
            // Boundary hits within phi(7p.A).y, per axis.
            std::vector<std::vector<Int>> hits(static_cast<size_t>(ell));
            if (!existing.empty()) {
                for (size_t t = 0; t < v7.size(); ++t) {
                    long long zp = w.act(g7[t], y);
                    for (size_t k = 0; k < existing.size(); ++k)
                        for (int i = 0; i < ell; ++i)
                            if (bnd[k][static_cast<size_t>(i)][static_cast<size_t>(zp)])
                                hits[static_cast<size_t>(i)].push_back(v7[t].z[static_cast<size_t>(i)]);
                }
            }
            std::vector<Int> dy(static_cast<size_t>(ell));
            for (int i = 0; i < ell; ++i) {
                const Int ai = prm.A.radius[static_cast<size_t>(i)];
                const Rat w2 = g2 * ai;       // clause (ii) spacing
                const Rat w3 = g3 * prm.q * ai; // clause (iii) spacing
                std::vector<Interval> bans;
                for (const auto& [u, mi] : nbrs) {
                    const Int& ui = u.z[static_cast<size_t>(i)];
                    const Int& dpi = res.d[static_cast<size_t>(mi)][static_cast<size_t>(i)];
                    for (const Int& ctr :
                         {Int(ui + dpi), Int(ui - dpi), Int(-ui + dpi), Int(-ui - dpi)})
                        bans.push_back({Rat(ctr) - w2, Rat(ctr) + w2,
                                        "ii:y'=" + std::to_string(Y[static_cast<size_t>(mi)])});
                }
                for (const Int& ui : hits[static_cast<size_t>(i)])
                    for (const Int& ctr : {Int(ui), Int(-ui)})
                        bans.push_back({Rat(ctr) - w3, Rat(ctr) + w3, "iii"});
                auto pick = least_admissible(P * ai, 2 * P * ai, bans);
                if (!pick)
                    throw std::runtime_error(
                        "orthogonalize: no admissible d_" + std::to_string(i + 1) + "(y) at y=" +
                        std::to_string(y) + "; range [" + Int(P * ai).str() + "," +
                        Int(2 * P * ai).str() + "]; forbidden " + intervals_to_text(bans));
                dy[static_cast<size_t>(i)] = *pick;
            }
            res.d[static_cast<size_t>(my)] = dy;
        }
    }

    std::vector<Int> dmax(static_cast<size_t>(ell), 0);
    for (const auto& dy : res.d)
        for (int i = 0; i < ell; ++i)
            if (dy[static_cast<size_t>(i)] > dmax[static_cast<size_t>(i)])
                dmax[static_cast<size_t>(i)] = dy[static_cast<size_t>(i)];

    // (4) R_y = phi(D_y).y, and the marker cover / overlap structure.
    std::vector<std::vector<int>> cover(static_cast<size_t>(n)); // x -> markers with x in R_y
    for (int m = 0; m < ny; ++m) {
        Rect D = rec(c.gamma, res.d[static_cast<size_t>(m)]);
        for (const GVec& v : enumerate(D, budget))
            cover[static_cast<size_t>(w.act(c.phi(v), Y[static_cast<size_t>(m)]))].push_back(m);
    }
    std::vector<std::set<int>> adj(static_cast<size_t>(ny));
    for (long long x = 0; x < n; ++x) {
        const auto& cv = cover[static_cast<size_t>(x)];
        for (size_t s = 0; s < cv.size(); ++s)
            for (size_t t = s; t < cv.size(); ++t) {
                adj[static_cast<size_t>(cv[s])].insert(cv[t]);
                adj[static_cast<size_t>(cv[t])].insert(cv[s]);
            }
    }
    // S(x): union of overlap neighborhoods over the markers covering x.
    std::vector<std::vector<int>> S(static_cast<size_t>(n));
    for (long long x = 0; x < n; ++x) {
        std::set<int> sx;
        for (int m : cover[static_cast<size_t>(x)])
            sx.insert(adj[static_cast<size_t>(m)].begin(), adj[static_cast<size_t>(m)].end());
        S[static_cast<size_t>(x)].assign(sx.begin(), sx.end());
    }

    // (5) Block-membership signatures.  For each marker, sweep the region it
    // can contribute to (|v_i| <= d_i + 2 dmax_i + 2 z_i, capped by the
    // outer block reach) and record the block code at every x with y in S(x).
    std::vector<std::vector<std::pair<int, int>>> sig(static_cast<size_t>(n));
    for (int m = 0; m < ny; ++m) {
        const auto& dy = res.d[static_cast<size_t>(m)];
        std::vector<Int> reach(static_cast<size_t>(ell));
        for (int i = 0; i < ell; ++i) {
            Int r1 = dy[static_cast<size_t>(i)] + 2 * dmax[static_cast<size_t>(i)] +
                     2 * c.zee.radius[static_cast<size_t>(i)];
            Int r2 = floor_mul(prm.block_mult, dy[static_cast<size_t>(i)]) + 1;
            reach[static_cast<size_t>(i)] = r1 < r2 ? r1 : r2;
        }
        std::vector<char> seen(static_cast<size_t>(n), 0);
        for (const GVec& v : enumerate(rec(c.gamma, reach), budget)) {
            long long x = w.act(c.phi(v), Y[static_cast<size_t>(m)]);
            const auto& sx = S[static_cast<size_t>(x)];
            if (!std::binary_search(sx.begin(), sx.end(), m)) continue;
            if (seen[static_cast<size_t>(x)])
                throw std::runtime_error(
                    "orthogonalize: period too small, marker y=" +
                    std::to_string(Y[static_cast<size_t>(m)]) +
                    " reaches x=" + std::to_string(x) + " twice");
            seen[static_cast<size_t>(x)] = 1;
            sig[static_cast<size_t>(x)].emplace_back(m, block_code(v, dy));
        }
    }
    for (long long x = 0; x < n; ++x) {
        if (sig[static_cast<size_t>(x)].size() != S[static_cast<size_t>(x)].size())
            throw std::runtime_error("orthogonalize: block reach exceeded at x=" +
                                     std::to_string(x));
        std::sort(sig[static_cast<size_t>(x)].begin(), sig[static_cast<size_t>(x)].end());
    }

    // The finest relation respecting all block memberships: equal nonempty
    // signatures; uncovered points stay singletons.
    std::map<std::vector<std::pair<int, int>>, long long> ids;
    std::vector<long long> labels(static_cast<size_t>(n));
    long long next = 0;
    for (long long x = 0; x < n; ++x) {
        if (S[static_cast<size_t>(x)].empty()) {
            labels[static_cast<size_t>(x)] = next++;
        } else {
            auto [it, fresh] = ids.emplace(sig[static_cast<size_t>(x)], next);
            if (fresh) ++next;
            labels[static_cast<size_t>(x)] = it->second;
        }
    }
    res.F = eqrel_from_labels(labels);

    // Emitted witnesses: per class, the offset bounding box relative to the
    // least marker in its signature, delta = eps / (18 p).  These are claims
    // for verify_rectangular to check, nothing more.
    const Rat delta = prm.eps / (Rat(18) * Pr);
    {
        // Class -> (anchor marker, point list).
        std::vector<int> anchor(static_cast<size_t>(res.F.num_classes), -1);
        std::vector<std::vector<long long>> members(static_cast<size_t>(res.F.num_classes));
        for (long long x = 0; x < n; ++x) {
            long long cl = res.F.class_id[static_cast<size_t>(x)];
            members[static_cast<size_t>(cl)].push_back(x);
            if (!sig[static_cast<size_t>(x)].empty())
                anchor[static_cast<size_t>(cl)] = sig[static_cast<size_t>(x)].front().first;
        }
        // One sweep per distinct anchor marker serves all its classes.
        std::vector<std::vector<long long>> by_anchor(static_cast<size_t>(ny));
        for (long long cl = 0; cl < res.F.num_classes; ++cl)
            if (anchor[static_cast<size_t>(cl)] >= 0)
                by_anchor[static_cast<size_t>(anchor[static_cast<size_t>(cl)])].push_back(cl);
        for (int m = 0; m < ny; ++m) {
            if (by_anchor[static_cast<size_t>(m)].empty()) continue;
            const auto& dy = res.d[static_cast<size_t>(m)];
            std::vector<Int> reach(static_cast<size_t>(ell));
            for (int i = 0; i < ell; ++i)
                reach[static_cast<size_t>(i)] = dy[static_cast<size_t>(i)] +
                                                2 * dmax[static_cast<size_t>(i)] +
                                                2 * c.zee.radius[static_cast<size_t>(i)];
            std::unordered_map<long long, size_t> wanted; // class -> slot
            std::vector<std::vector<Int>> lo, hi;
            for (size_t s = 0; s < by_anchor[static_cast<size_t>(m)].size(); ++s) {
                wanted[by_anchor[static_cast<size_t>(m)][s]] = s;
                lo.emplace_back();
                hi.emplace_back();
            }
            for (const GVec& v : enumerate(rec(c.gamma, reach), budget)) {
                long long x = w.act(c.phi(v), Y[static_cast<size_t>(m)]);
                auto it = wanted.find(res.F.class_id[static_cast<size_t>(x)]);
                if (it == wanted.end()) continue;
                auto& l = lo[it->second];
                auto& h = hi[it->second];
                if (l.empty()) {
                    l = v.z;
                    h = v.z;
                } else {
                    for (int i = 0; i < ell; ++i) {
                        if (v.z[static_cast<size_t>(i)] < l[static_cast<size_t>(i)])
                            l[static_cast<size_t>(i)] = v.z[static_cast<size_t>(i)];
                        if (v.z[static_cast<size_t>(i)] > h[static_cast<size_t>(i)])
                            h[static_cast<size_t>(i)] = v.z[static_cast<size_t>(i)];
                    }
                }
            }
            for (const auto& [cl, slot] : wanted) {
                if (lo[slot].empty()) continue;
                GVec mid = gvec_zero(ell, c.gamma);
                std::vector<Int> radii(static_cast<size_t>(ell));
                for (int i = 0; i < ell; ++i) {
                    mid.z[static_cast<size_t>(i)] =
                        floor_div(lo[slot][static_cast<size_t>(i)] + hi[slot][static_cast<size_t>(i)],
                                  Int(2));
                    Int r1 = mid.z[static_cast<size_t>(i)] - lo[slot][static_cast<size_t>(i)];
                    Int r2 = hi[slot][static_cast<size_t>(i)] - mid.z[static_cast<size_t>(i)];
                    radii[static_cast<size_t>(i)] = r1 > r2 ? r1 : r2;
                }
                long long base = w.act(c.phi(mid), Y[static_cast<size_t>(m)]);
                res.F.witness[cl] = RoughWitness{rec(c.gamma, radii), delta, base};
            }
        }
    }

    // Certificate.
    {
        std::ostringstream os;
        os << "orthogonalize certificate\n";
        os << "p " << P.str() << " eps " << rat_str(prm.eps) << " q " << rat_str(prm.q) << " b "
           << prm.b << "\n";
        os << "guards ii " << rat_str(g2) << " iii " << rat_str(g3) << " marker "
           << rat_str(prm.marker_mult) << " partition " << rat_str(prm.partition_mult)
           << " scan " << rat_str(prm.scan_mult) << " block " << rat_str(prm.block_mult) << "\n";
        os << "A " << rect_to_text(prm.A) << "\n";
        os << "markers " << ny << "\n";
        for (long long y : Y) os << "y " << y << "\n";
        os << "parts " << res.parts.size() << "\n";
        for (size_t j = 0; j < res.parts.size(); ++j) {
            os << "part " << j;
            for (long long y : res.parts[j]) os << " " << y;
            os << "\n";
        }
        for (int m = 0; m < ny; ++m) {
            os << "d " << Y[static_cast<size_t>(m)];
            for (const Int& di : res.d[static_cast<size_t>(m)]) os << " " << di.str();
            os << "\n";
        }
        os << "classes " << res.F.num_classes << "\n";
        std::vector<long long> cls;
        for (const auto& [cl, wt] : res.F.witness) cls.push_back(cl);
        std::sort(cls.begin(), cls.end());
        for (long long cl : cls) {
            const auto& wt = res.F.witness.at(cl);
            os << "witness " << cl << " base " << wt.base << " delta " << rat_str(wt.delta)
               << " B " << rect_to_text(wt.B) << "\n";
        }
        os << "end\n";
        res.certificate = os.str();
    }
    return res;
}

OrthoCheck is_orthogonal(const Window& w, const EqRel& E, const EqRel& F, const Chart& c,
                         const Rect& A, std::optional<Rat> dilation, const std::vector<char>* xh,
                         const Int& budget, int jobs) {
    Rat dil = dilation ? *dilation : Rat(30 * c.ell);
    Rect D = scale(dil, A);
    if (!subset_of(D, c.dom))
        throw std::invalid_argument("is_orthogonal: dilation rectangle escapes dom");
    std::vector<GroupElement> gs;
    for (const GVec& v : enumerate(D, budget)) gs.push_back(c.phi(v));
    const long long n = w.num_points;
    for (int i = 1; i <= c.ell; ++i) {
        std::vector<char> mE(static_cast<size_t>(n), 0), mF(static_cast<size_t>(n), 0);
        for (long long z : boundary(w, E, c, A, i, xh, jobs))
            for (const auto& g : gs) mE[static_cast<size_t>(w.act(g, z))] = 1;
        for (long long z : boundary(w, F, c, A, i, xh, jobs))
            for (const auto& g : gs) mF[static_cast<size_t>(w.act(g, z))] = 1;
        for (long long x = 0; x < n; ++x)
            if (mE[static_cast<size_t>(x)] && mF[static_cast<size_t>(x)])
                return {false, "axis " + std::to_string(i) + " common dilated boundary point " +
                                   std::to_string(x)};
    }
    return {true, ""};
}

OrthoSeqReport verify_orthoseq(const Window& w, const std::vector<EqRel>& relations,
                               const Chart& c, const Rect& A, const Rat& eps, const Rat& q,
                               const std::vector<std::pair<long long, long long>>& pairs) {
    if (!c.trivial_stabilizers())
        throw std::invalid_argument("verify_orthoseq: requires the trivial stabilizer family");
    if (!(eps < Rat(1, 4)))
        throw std::invalid_argument("verify_orthoseq: hypothesis eps < 1/4 violated");
    if (!(12 * eps < q))
        throw std::invalid_argument("verify_orthoseq: hypothesis 12 eps < q violated");
    if (!(q < Rat(1, 24 * c.ell)))
        throw std::invalid_argument("verify_orthoseq: hypothesis q < 1/(24 l) violated");
    (void)A;

    // Pair validation: y must lie in phi(Zee).x.
    std::vector<GroupElement> zs;
    for (const GVec& v : enumerate(c.zee, Int(1000000))) zs.push_back(c.phi(v));

    OrthoSeqReport rep;
    rep.constants = "l " + std::to_string(c.ell) + " eps " + rat_str(eps) + " q " + rat_str(q);
    for (const auto& [x, y] : pairs) {
        bool near = false;
        for (const auto& g : zs)
            if (w.act(g, x) == y) {
                near = true;
                break;
            }
        if (!near)
            throw std::invalid_argument("verify_orthoseq: sampled y=" + std::to_string(y) +
                                        " not in phi(Zee).x for x=" + std::to_string(x));
        long long fails = 0;
        for (const auto& E : relations)
            if (E.class_id[static_cast<size_t>(x)] != E.class_id[static_cast<size_t>(y)]) ++fails;
        ++rep.pairs_checked;
        if (fails > rep.max_failures) rep.max_failures = fails;
        if (fails > c.ell)
            rep.violations.push_back("pair (" + std::to_string(x) + "," + std::to_string(y) +
                                     ") separated by " + std::to_string(fails) + " relations");
    }
    rep.pass = rep.violations.empty();
    return rep;
}

} // namespace nilrect
