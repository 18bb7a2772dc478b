// array.cpp -- the diagonalization array, the eventual-agreement report,
// and the coding map.  Every clause assertion here runs through the
// independent verifiers (verify_rectangular, is_orthogonal,
// box_invariant_mask, build_selector); the constructor's own bookkeeping
// is never trusted.

#include "nilrect/array.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace nilrect {

namespace {

std::string pt(long long x) { return std::to_string(x); }

std::vector<GroupElement> sym_closure(const Chart& c, const Rect& R, const Int& budget) {
    std::set<GroupElement> out;
    out.insert(identity(c.group));
    for (const GVec& v : enumerate(R, budget)) {
        GroupElement g = c.phi(v);
        out.insert(g);
        out.insert(invert(g));
    }
    return std::vector<GroupElement>(out.begin(), out.end());
}

// First pair witnessing that `fine` does not refine `coarse`.
std::optional<std::pair<long long, long long>> refine_witness(const EqRel& fine,
                                                              const EqRel& coarse) {
    std::unordered_map<long long, long long> seen, rep;
    for (long long x = 0; x < fine.num_points; ++x) {
        long long cf = fine.class_id[static_cast<size_t>(x)];
        long long cc = coarse.class_id[static_cast<size_t>(x)];
        auto [it, fresh] = seen.emplace(cf, cc);
        if (fresh)
            rep.emplace(cf, x);
        else if (it->second != cc)
            return std::make_pair(rep[cf], x);
    }
    return std::nullopt;
}

// On the masked set, E and F must induce the same partition; returns a
// witness pair otherwise (equivalent in one, inequivalent in the other).
std::optional<std::pair<long long, long long>> partition_mismatch(const EqRel& E, const EqRel& F,
                                                                  const std::vector<char>& mask) {
    std::unordered_map<long long, long long> e2f, f2e, erep, frep;
    for (long long x = 0; x < E.num_points; ++x) {
        if (!mask[static_cast<size_t>(x)]) continue;
        long long ce = E.class_id[static_cast<size_t>(x)];
        long long cf = F.class_id[static_cast<size_t>(x)];
        auto [ie, fe] = e2f.emplace(ce, cf);
        if (fe)
            erep.emplace(ce, x);
        else if (ie->second != cf)
            return std::make_pair(erep[ce], x);
        auto [if_, ff] = f2e.emplace(cf, ce);
        if (ff)
            frep.emplace(cf, x);
        else if (if_->second != ce)
            return std::make_pair(frep[cf], x);
    }
    return std::nullopt;
}

struct Dsu {
    std::vector<long long> up;
    explicit Dsu(long long n) : up(static_cast<size_t>(n)) {
        std::iota(up.begin(), up.end(), 0);
    }
    long long find(long long x) {
        while (up[static_cast<size_t>(x)] != x) {
            up[static_cast<size_t>(x)] = up[static_cast<size_t>(up[static_cast<size_t>(x)])];
            x = up[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(long long a, long long b) {
        a = find(a);
        b = find(b);
        if (a != b) up[static_cast<size_t>(a < b ? b : a)] = a < b ? a : b;
    }
};

std::string pair_detail(const std::pair<long long, long long>& xy) {
    return "x=" + pt(xy.first) + " y=" + pt(xy.second);
}

long long bit_width(Int values) {
    long long b = 1;
    while ((Int(1) << b) < values) ++b;
    return b;
}

} // namespace

bool ColumnReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string ColumnReport::to_text() const {
    std::ostringstream os;
    os << "column " << column << "\n";
    for (const auto& c : checks) {
        os << (c.pass ? "[pass] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << "\n";
    }
    return os.str();
}

EqRel orbit_relation(const Window& w, const std::vector<GroupElement>& gens) {
    Dsu dsu(w.num_points);
    for (const auto& g : gens)
        for (long long x = 0; x < w.num_points; ++x) dsu.unite(x, w.act(g, x));
    std::vector<long long> labels(static_cast<size_t>(w.num_points));
    for (long long x = 0; x < w.num_points; ++x) labels[static_cast<size_t>(x)] = dsu.find(x);
    return eqrel_from_labels(labels);
}

ArrayLevel instantiate_level(const Scenario& s, int k) {
    const int L = static_cast<int>(s.levels.size());
    if (k < 0 || k >= L) throw std::invalid_argument("instantiate_level: level out of range");
    const LevelSpec& lv = s.levels[static_cast<size_t>(k)];
    ArrayLevel al;
    al.gens = lv.generators;
    al.eps = lv.epsilon;
    al.q = lv.q;
    al.p = lv.p;
    const int rank = static_cast<int>(lv.generators.size());
    const int rank_next =
        k + 1 < L ? static_cast<int>(s.levels[static_cast<size_t>(k + 1)].generators.size())
                  : rank;
    al.b = rank_next + 1;

    OrthoParams prm;
    prm.eps = lv.epsilon;
    prm.q = lv.q;
    prm.b = al.b;
    prm.p = lv.p;
    const LevelKnobs& kn = lv.knobs;
    if (kn.partition_mult) prm.partition_mult = *kn.partition_mult;
    if (kn.scan_mult) prm.scan_mult = *kn.scan_mult;
    if (kn.block_mult) prm.block_mult = *kn.block_mult;
    if (kn.guard2_mult) prm.guard2 = *kn.guard2_mult;
    if (kn.guard3_mult) prm.guard3 = *kn.guard3_mult;
    if (kn.marker_mult) prm.marker_mult = *kn.marker_mult;
    al.dilation = kn.ortho_dilation;

    const Int P = lv.p == 0 ? reference_p(rank) : Int(lv.p);
    std::vector<Int> dom(static_cast<size_t>(rank));
    for (int i = 0; i < rank; ++i) {
        const Int& ai = lv.A[static_cast<size_t>(i)];
        const Int& zi = lv.zee[static_cast<size_t>(i)];
        Int blocks = ceil_mul(prm.block_mult * 2 * P, ai) + 1;
        Int sig = Int(6) * P * ai + 2 * zi;
        dom[static_cast<size_t>(i)] =
            std::max({ceil_mul(prm.partition_mult * P, ai), ceil_mul(prm.scan_mult * P, ai),
                      Int(8) * P * ai, blocks < sig ? blocks : sig,
                      Int(12) * P * ai + 4 * zi + 2, Int(3) * zi});
    }
    al.chart = build_span_chart(s.group, lv.generators, lv.zee, dom);
    al.A = rec(al.chart.gamma, lv.A);
    prm.A = al.A;
    al.prm = prm;
    return al;
}

ArrayState build_free_array(const Scenario& s, int columns, const Int& budget, int jobs) {
    if (columns < 1) throw std::invalid_argument("free-array: need at least one column");
    ScaleReport scales = validate_scales(s);
    if (!scales.all_pass()) {
        for (const auto& c : scales.checks)
            if (!c.pass)
                throw std::invalid_argument("free-array: scenario scales: " + c.name +
                                            (c.detail.empty() ? "" : " (" + c.detail + ")"));
    }

    ArrayState a;
    a.window = std::make_shared<Window>(build_window(s.group, s.period));
    const Window& w = *a.window;
    const long long n = w.num_points;
    const int L = static_cast<int>(s.levels.size());

    // Instantiate the levels: span charts with dom wide enough for every
    // region the column construction and the verifiers touch.
    for (int k = 0; k < L; ++k) a.levels.push_back(instantiate_level(s, k));

    // Chart compatibility: every level's generators must sit inside
    // phi_k(Zee_k) (the working analog of Im(phi_{k-1}) union U_k inside
    // phi_k(Zee_k); the Im part is enforced per point on the selectors
    // below).  Freeness of the used probes is checked on the window.
    for (int k = 0; k < L; ++k) {
        const ArrayLevel& al = a.levels[static_cast<size_t>(k)];
        for (const auto& g : al.gens) {
            auto v = al.chart.phi_inv(g);
            if (!v || !member(*v, al.chart.zee))
                throw std::invalid_argument("free-array: level " + std::to_string(k + 1) +
                                            " generator " + element_to_text(g) +
                                            " escapes phi(Zee)");
        }
        std::vector<GroupElement> probes = sym_closure(al.chart, al.chart.zee, budget);
        FreenessReport fr = check_local_freeness(w, probes);
        if (!fr.pass())
            throw std::invalid_argument("free-array: level " + std::to_string(k + 1) +
                                        " not free on the window: " + fr.violations.front());
    }

    // Clause (v) bookkeeping: cached invariance masks of every built
    // relation at the row's 8 p_k . A_k probe (independent sweeps).
    std::vector<std::vector<std::vector<char>>> inv8(static_cast<size_t>(L));

    for (int col = 1; col <= columns; ++col) {
        const int rtop = std::min(col, L);
        std::vector<EqRel> colE(static_cast<size_t>(rtop));
        std::vector<EqRel> colF(static_cast<size_t>(rtop));
        std::vector<RectCert> colC(static_cast<size_t>(rtop));
        std::vector<std::vector<long long>> colS(static_cast<size_t>(rtop));

        // Auxiliary column: per row, the orthogonalizing construction
        // against that row's existing relations, then independent
        // re-certification.
        for (int k = 1; k <= rtop; ++k) {
            ArrayLevel& al = a.levels[static_cast<size_t>(k - 1)];
            std::vector<CertifiedRel> existing;
            for (int m = k; m < col; ++m)
                existing.push_back({a.E[static_cast<size_t>(m - 1)][static_cast<size_t>(k - 1)],
                                    a.Fcert[static_cast<size_t>(m - 1)][static_cast<size_t>(k - 1)]});
            OrthoResult res;
            try {
                res = build_orthogonal_relation(w, al.chart, al.prm, existing, nullptr, budget,
                                                jobs);
            } catch (const std::exception& e) {
                throw std::runtime_error("free-array: column " + std::to_string(col) + " row " +
                                         std::to_string(k) + ": " + e.what());
            }
            RectCert cert = verify_rectangular(w, res.F, al.chart, al.A, al.eps, Rat(2), nullptr,
                                               budget);
            if (!cert.pass)
                throw std::runtime_error("free-array: column " + std::to_string(col) + " row " +
                                         std::to_string(k) +
                                         ": auxiliary relation not rectangular: " + cert.failure);
            colF[static_cast<size_t>(k - 1)] = std::move(res.F);
            colC[static_cast<size_t>(k - 1)] = std::move(cert);
        }

        // Diagonal, then transport downward through the verified selectors.
        // The selector bound is the next level's phi(Zee): build_selector
        // re-verifies [x]_F inside K . x, which is exactly the containment
        // clause (b) rests on.
        colE[static_cast<size_t>(rtop - 1)] = colF[static_cast<size_t>(rtop - 1)];
        for (int k = rtop - 1; k >= 1; --k) {
            const ArrayLevel& up = a.levels[static_cast<size_t>(k)];
            std::vector<GroupElement> K = sym_closure(up.chart, up.chart.zee, budget);
            std::vector<long long> sig = build_selector(w, colF[static_cast<size_t>(k - 1)], K);
            std::vector<long long> labels(static_cast<size_t>(n));
            const EqRel& above = colE[static_cast<size_t>(k)];
            for (long long x = 0; x < n; ++x)
                labels[static_cast<size_t>(x)] =
                    above.class_id[static_cast<size_t>(sig[static_cast<size_t>(x)])];
            colE[static_cast<size_t>(k - 1)] = eqrel_from_labels(labels);
            // The transported relation inherits no witnesses; clause (ii)
            // is certified through the contained F_k.
            colS[static_cast<size_t>(k - 1)] = std::move(sig);
        }

        a.E.push_back(std::move(colE));
        a.F.push_back(std::move(colF));
        a.Fcert.push_back(std::move(colC));
        a.sigma.push_back(std::move(colS));

        const auto& E = a.E.back();
        const auto& F = a.F.back();
        const auto& S = a.sigma.back();

        for (int k = 1; k <= rtop; ++k) {
            const ArrayLevel& al = a.levels[static_cast<size_t>(k - 1)];
            inv8[static_cast<size_t>(k - 1)].push_back(box_invariant_mask(
                w, E[static_cast<size_t>(k - 1)], al.chart,
                scale(Rat(8) * (al.p == 0 ? Rat(reference_p(al.chart.ell)) : Rat(al.p)), al.A),
                budget, jobs));
        }

        // Clause checks -------------------------------------------------
        ColumnReport rep;
        rep.column = col;
        EqRel orb = orbit_relation(w, a.levels[static_cast<size_t>(rtop - 1)].gens);

        for (int k = 1; k <= rtop; ++k) {
            const ArrayLevel& al = a.levels[static_cast<size_t>(k - 1)];
            const EqRel& Ek = E[static_cast<size_t>(k - 1)];
            std::string row = "row " + std::to_string(k);

            // (i) inside the G_n-orbit relation.
            auto wi = refine_witness(Ek, orb);
            rep.checks.push_back({"(i) " + row + " inside the orbit relation", !wi,
                                  wi ? pair_detail(*wi) : ""});

            // (ii) sub-rectangular: contains the certified F_k.
            auto wf = refine_witness(F[static_cast<size_t>(k - 1)], Ek);
            rep.checks.push_back({"(ii) " + row + " contains its certified rectangular relation",
                                  !wf, wf ? pair_detail(*wf) : "certificate re-verified"});

            // (iii) pairwise orthogonality along the row.
            for (int m = k; m < col; ++m) {
                OrthoCheck oc = is_orthogonal(
                    w, a.E[static_cast<size_t>(m - 1)][static_cast<size_t>(k - 1)], Ek, al.chart,
                    scale(al.q, al.A), al.dilation, nullptr, budget, jobs);
                rep.checks.push_back({"(iii) " + row + " orthogonal to column " +
                                          std::to_string(m),
                                      oc.ok, oc.witness});
            }

            // (v) per-point budget over the whole row so far.
            {
                long long worst = 0, wx = -1;
                for (long long x = 0; x < n; ++x) {
                    long long cnt = 0;
                    for (const auto& mask : inv8[static_cast<size_t>(k - 1)])
                        if (!mask[static_cast<size_t>(x)]) ++cnt;
                    if (cnt > worst) {
                        worst = cnt;
                        wx = x;
                    }
                }
                rep.checks.push_back({"(v) " + row + " per-point budget <= " +
                                          std::to_string(al.b),
                                      worst <= al.b,
                                      "max " + std::to_string(worst) +
                                          (wx >= 0 ? " at x=" + pt(wx) : "")});
            }
        }

        // (iv) vertically adjacent pairs agree on the invariant set.
        for (int k = 1; k < rtop; ++k) {
            const ArrayLevel& up = a.levels[static_cast<size_t>(k)];
            std::vector<char> mask =
                box_invariant_mask(w, E[static_cast<size_t>(k)], up.chart, up.chart.zee, budget,
                                   jobs);
            auto wm = partition_mismatch(E[static_cast<size_t>(k)], E[static_cast<size_t>(k - 1)],
                                         mask);
            long long inv = std::count(mask.begin(), mask.end(), char(1));
            rep.checks.push_back({"(iv) rows " + std::to_string(k) + "/" + std::to_string(k + 1) +
                                      " agree on the invariant set",
                                  !wm,
                                  wm ? pair_detail(*wm)
                                     : std::to_string(inv) + " invariant points"});
        }

        // (vi) downward transfer on the 3.Zee-invariant set.
        for (int k = 2; k <= rtop; ++k) {
            const ArrayLevel& al = a.levels[static_cast<size_t>(k - 1)];
            std::vector<char> mask = box_invariant_mask(
                w, E[static_cast<size_t>(k - 1)], al.chart, scale(Rat(3), al.chart.zee), budget,
                jobs);
            for (int t = 1; t < k; ++t) {
                auto wm = partition_mismatch(E[static_cast<size_t>(k - 1)],
                                             E[static_cast<size_t>(t - 1)], mask);
                rep.checks.push_back({"(vi) rows " + std::to_string(t) + "/" + std::to_string(k) +
                                          " agree on the 3.Zee-invariant set",
                                      !wm, wm ? pair_detail(*wm) : ""});
            }
        }

        // (b) selector displacements stay inside phi_{k+1}(Zee_{k+1}).
        for (int k = 1; k < rtop; ++k) {
            const ArrayLevel& up = a.levels[static_cast<size_t>(k)];
            std::vector<GroupElement> zels;
            for (const GVec& v : enumerate(up.chart.zee, budget)) zels.push_back(up.chart.phi(v));
            long long bad = -1;
            for (long long x = 0; x < n && bad < 0; ++x) {
                long long target = S[static_cast<size_t>(k - 1)][static_cast<size_t>(x)];
                bool hit = false;
                for (const auto& g : zels)
                    if (w.act(g, x) == target) {
                        hit = true;
                        break;
                    }
                if (!hit) bad = x;
            }
            rep.checks.push_back({"(b) selector of row " + std::to_string(k) +
                                      " moves within phi(Zee) of row " + std::to_string(k + 1),
                                  bad < 0, bad >= 0 ? "x=" + pt(bad) : ""});
        }

        a.reports.push_back(rep);
        if (!rep.all_pass()) {
            for (const auto& c : rep.checks)
                if (!c.pass)
                    throw std::runtime_error("free-array: column " + std::to_string(col) +
                                             ", clause " + c.name +
                                             (c.detail.empty() ? "" : ": " + c.detail));
        }
    }

    // Deterministic certificate.
    std::ostringstream os;
    os << "free-array certificate\n";
    os << "group " << group_to_text(s.group) << " period " << s.period << " points " << n
       << " columns " << columns << " levels " << L << "\n";
    for (int k = 0; k < L; ++k) {
        const ArrayLevel& al = a.levels[static_cast<size_t>(k)];
        os << "level " << (k + 1) << " rank " << al.chart.ell << " p " << al.p << " b " << al.b
           << " eps " << rat_str(al.eps) << " q " << rat_str(al.q) << " A " << rect_to_text(al.A)
           << " zee " << rect_to_text(al.chart.zee) << "\n";
    }
    for (const auto& rep : a.reports) {
        os << rep.to_text();
        for (size_t k = 0; k < a.E[static_cast<size_t>(rep.column - 1)].size(); ++k)
            os << "relation row " << (k + 1) << " column " << rep.column << " classes "
               << a.E[static_cast<size_t>(rep.column - 1)][k].num_classes << "\n";
    }
    os << "end\n";
    a.certificate = os.str();
    return a;
}

std::string AgreementReport::to_text() const {
    std::ostringstream os;
    os << "eventual-agreement report\n";
    os << "pairs " << pairs_checked << " max-row-failures " << max_row_failures
       << " max-bottom-failures " << max_bottom_failures << "\n";
    for (const auto& v : violations) os << "violation " << v << "\n";
    os << (pass ? "agreement: pass" : "agreement: FAIL") << "\n";
    return os.str();
}

AgreementReport verify_eventual_agreement(const ArrayState& a,
                                          const std::vector<AgreementPair>& pairs) {
    const Window& w = *a.window;
    const int N = static_cast<int>(a.E.size());
    const int L = static_cast<int>(a.levels.size());
    AgreementReport rep;

    // Lazy per-(level, column) 3.Zee invariance masks for the propagation
    // bound.
    std::vector<std::vector<std::optional<std::vector<char>>>> mask3(
        static_cast<size_t>(L), std::vector<std::optional<std::vector<char>>>(
                                    static_cast<size_t>(N)));
    auto mask_at = [&](int k, int col) -> const std::vector<char>& {
        auto& slot = mask3[static_cast<size_t>(k - 1)][static_cast<size_t>(col - 1)];
        if (!slot) {
            const ArrayLevel& al = a.levels[static_cast<size_t>(k - 1)];
            slot = box_invariant_mask(w, a.rel(k, col), al.chart, scale(Rat(3), al.chart.zee));
        }
        return *slot;
    };

    for (const auto& p : pairs) {
        if (p.level < 1 || p.level > L)
            throw std::invalid_argument("verify_eventual_agreement: level out of range");
        const ArrayLevel& al = a.levels[static_cast<size_t>(p.level - 1)];
        bool reachable = p.x == p.y;
        for (const auto& g : al.gens) {
            if (w.act(g, p.x) == p.y || w.act(invert(g), p.x) == p.y) reachable = true;
        }
        if (!reachable)
            throw std::invalid_argument("verify_eventual_agreement: y=" + pt(p.y) +
                                        " is not a level-" + std::to_string(p.level) +
                                        " generator move of x=" + pt(p.x));
        const int k = p.level;
        long long rowfail = 0, bottomfail = 0, bottom_beyond = 0, hypfail = 0;
        std::string rowidx, botidx;
        for (int col = 1; col <= N; ++col) {
            if (a.rel(1, col).class_id[static_cast<size_t>(p.x)] !=
                a.rel(1, col).class_id[static_cast<size_t>(p.y)]) {
                ++bottomfail;
                botidx += (botidx.empty() ? "" : ",") + std::to_string(col);
                if (col >= k) ++bottom_beyond;
            }
            if (col < k) continue;
            if (a.rel(k, col).class_id[static_cast<size_t>(p.x)] !=
                a.rel(k, col).class_id[static_cast<size_t>(p.y)]) {
                ++rowfail;
                rowidx += (rowidx.empty() ? "" : ",") + std::to_string(col);
            }
            const std::vector<char>& m = mask_at(k, col);
            if (!m[static_cast<size_t>(p.x)] || !m[static_cast<size_t>(p.y)]) ++hypfail;
        }
        ++rep.pairs_checked;
        if (rowfail > rep.max_row_failures) rep.max_row_failures = rowfail;
        if (bottomfail > rep.max_bottom_failures) rep.max_bottom_failures = bottomfail;
        const long long rank = static_cast<long long>(al.gens.size());
        if (rowfail > rank)
            rep.violations.push_back("pair (" + pt(p.x) + "," + pt(p.y) + ") level " +
                                     std::to_string(k) + ": " + std::to_string(rowfail) +
                                     " row failures (columns " + rowidx + ") exceed the rank " +
                                     std::to_string(rank));
        if (bottom_beyond > rowfail + hypfail)
            rep.violations.push_back("pair (" + pt(p.x) + "," + pt(p.y) + ") level " +
                                     std::to_string(k) + ": " + std::to_string(bottom_beyond) +
                                     " bottom-row failures (columns " + botidx +
                                     ") exceed the propagation bound " +
                                     std::to_string(rowfail + hypfail));
    }
    rep.pass = rep.violations.empty();
    return rep;
}

E0Code e0_encode(const ArrayState& a, const std::vector<std::vector<GroupElement>>& localization) {
    const Window& w = *a.window;
    const long long n = w.num_points;
    const int N = static_cast<int>(a.E.size());
    if (!localization.empty() && static_cast<int>(localization.size()) != N)
        throw std::invalid_argument("e0_encode: localization must cover every column");

    // K_n: increasing symmetric sets with [x]_{E_{1,n}} inside K_n . x,
    // either supplied or computed from the in-class displacements.
    std::vector<std::vector<GroupElement>> K(static_cast<size_t>(N + 1));
    std::set<GroupElement> acc;
    acc.insert(identity(w.group));
    K[0] = {identity(w.group)};
    for (int m = 1; m <= N; ++m) {
        if (!localization.empty()) {
            for (const auto& g : localization[static_cast<size_t>(m - 1)]) {
                acc.insert(g);
                acc.insert(invert(g));
            }
        } else {
            // The K-bound needs the displacement between every in-class
            // pair, not just least-to-member: on a multi-axis window the
            // differences of two member displacements leave the set of
            // member displacements (mixed-sign corners).  Close each
            // class's displacement set under differences.
            const EqRel& E = a.rel(1, m);
            for (const auto& cls : E.classes()) {
                std::vector<GroupElement> D;
                D.reserve(cls.size());
                for (long long x : cls) D.push_back(window_displacement(w, cls.front(), x));
                for (const auto& gx : D) {
                    GroupElement gi = invert(gx);
                    for (const auto& gy : D) acc.insert(multiply(gy, gi));
                }
            }
        }
        K[static_cast<size_t>(m)] = std::vector<GroupElement>(acc.begin(), acc.end());
    }

    E0Code code;
    code.selector.resize(static_cast<size_t>(N + 1));
    code.selector[0].resize(static_cast<size_t>(n));
    std::iota(code.selector[0].begin(), code.selector[0].end(), 0);
    for (int m = 1; m <= N; ++m)
        code.selector[static_cast<size_t>(m)] =
            build_selector(w, a.rel(1, m), K[static_cast<size_t>(m)]);

    code.widths.assign(static_cast<size_t>(N + 1), 0);
    code.bits.assign(static_cast<size_t>(n), {});
    code.widths[0] = bit_width(Int(n));
    std::vector<std::vector<long long>> values(static_cast<size_t>(N + 1),
                                               std::vector<long long>(static_cast<size_t>(n)));
    values[0] = code.selector[0];

    for (int m = 1; m <= N; ++m) {
        // K_m K_{m-1}, deduplicated and sorted for a stable rank function.
        std::set<GroupElement> prod;
        for (const auto& g1 : K[static_cast<size_t>(m)])
            for (const auto& g0 : K[static_cast<size_t>(m - 1)]) prod.insert(multiply(g1, g0));
        std::vector<GroupElement> KK(prod.begin(), prod.end());
        code.widths[static_cast<size_t>(m)] =
            bit_width(Int(n) * Int(static_cast<long long>(KK.size())));
        const auto& Sm = code.selector[static_cast<size_t>(m)];
        const auto& Sp = code.selector[static_cast<size_t>(m - 1)];
        // On a non-coset window the mod-N reduction is a quotient group, so
        // two elements act identically iff they reduce to the same
        // coordinates: bucketing KK by its reduced rank turns the carrier
        // search into one lookup per point.  Each hit is still re-checked
        // through the action itself; coset windows keep the full scan.
        std::unordered_map<long long, std::pair<long long, long long>> bucket;
        if (!w.is_coset)
            for (size_t t = 0; t < KK.size(); ++t) {
                auto [it, fresh] = bucket.emplace(w.reduce_rank(KK[t]),
                                                  std::make_pair(static_cast<long long>(t), 1LL));
                if (!fresh) ++it->second.second;
            }
        for (long long x = 0; x < n; ++x) {
            long long gidx = -1;
            if (!w.is_coset) {
                GroupElement g =
                    multiply(w.point_element(Sm[static_cast<size_t>(x)]),
                             invert(w.point_element(Sp[static_cast<size_t>(x)])));
                auto it = bucket.find(w.reduce_rank(g));
                if (it != bucket.end()) {
                    if (it->second.second > 1)
                        throw std::runtime_error(
                            "e0_encode: freeness violated at scale " + std::to_string(m) +
                            " (two carriers of S_" + std::to_string(m - 1) + "(x) to S_" +
                            std::to_string(m) + "(x) at x=" + pt(x) + ")");
                    gidx = it->second.first;
                    if (w.act(KK[static_cast<size_t>(gidx)], Sp[static_cast<size_t>(x)]) !=
                        Sm[static_cast<size_t>(x)])
                        throw std::logic_error("e0_encode: carrier bucket disagrees with the action");
                }
            } else {
                for (size_t t = 0; t < KK.size(); ++t) {
                    if (w.act(KK[t], Sp[static_cast<size_t>(x)]) == Sm[static_cast<size_t>(x)]) {
                        if (gidx >= 0)
                            throw std::runtime_error(
                                "e0_encode: freeness violated at scale " + std::to_string(m) +
                                " (two carriers of S_" + std::to_string(m - 1) + "(x) to S_" +
                                std::to_string(m) + "(x) at x=" + pt(x) + ")");
                        gidx = static_cast<long long>(t);
                    }
                }
            }
            if (gidx < 0)
                throw std::runtime_error("e0_encode: no element of K_" + std::to_string(m) +
                                         " K_" + std::to_string(m - 1) + " carries S_" +
                                         std::to_string(m - 1) + "(x) to S_" + std::to_string(m) +
                                         "(x) at x=" + pt(x));
            values[static_cast<size_t>(m)][static_cast<size_t>(x)] =
                Sm[static_cast<size_t>(x)] * static_cast<long long>(KK.size()) + gidx;
        }
    }

    code.offsets.assign(static_cast<size_t>(N + 2), 0);
    for (int m = 0; m <= N; ++m)
        code.offsets[static_cast<size_t>(m + 1)] =
            code.offsets[static_cast<size_t>(m)] + code.widths[static_cast<size_t>(m)];
    for (long long x = 0; x < n; ++x) {
        auto& b = code.bits[static_cast<size_t>(x)];
        b.reserve(static_cast<size_t>(code.offsets.back()));
        for (int m = 0; m <= N; ++m) {
            long long v = values[static_cast<size_t>(m)][static_cast<size_t>(x)];
            for (long long i = code.widths[static_cast<size_t>(m)] - 1; i >= 0; --i)
                b.push_back(static_cast<char>((v >> i) & 1));
        }
    }
    return code;
}

bool e0_injective(const E0Code& code, long long* x, long long* y) {
    std::unordered_map<std::string, long long> seen;
    for (long long p = 0; p < static_cast<long long>(code.bits.size()); ++p) {
        std::string key(code.bits[static_cast<size_t>(p)].begin(),
                        code.bits[static_cast<size_t>(p)].end());
        auto [it, fresh] = seen.emplace(std::move(key), p);
        if (!fresh) {
            if (x) *x = it->second;
            if (y) *y = p;
            return false;
        }
    }
    return true;
}

long long e0_agreement_level(const E0Code& code, long long x, long long y) {
    const auto& bx = code.bits[static_cast<size_t>(x)];
    const auto& by = code.bits[static_cast<size_t>(y)];
    long long last_diff = -1;
    for (long long m = 0; m + 1 < static_cast<long long>(code.offsets.size()); ++m) {
        for (long long i = code.offsets[static_cast<size_t>(m)];
             i < code.offsets[static_cast<size_t>(m + 1)]; ++i)
            if (bx[static_cast<size_t>(i)] != by[static_cast<size_t>(i)]) {
                last_diff = m;
                break;
            }
    }
    return last_diff + 1;
}

std::string e0_to_text(const E0Code& code) {
    std::ostringstream os;
    os << "e0 code blocks " << code.widths.size() << " widths";
    for (long long wd : code.widths) os << " " << wd;
    os << "\n";
    for (size_t x = 0; x < code.bits.size(); ++x) {
        os << x << " ";
        for (char b : code.bits[x]) os << (b ? '1' : '0');
        os << "\n";
    }
    os << "end\n";
    return os.str();
}

} // namespace nilrect
