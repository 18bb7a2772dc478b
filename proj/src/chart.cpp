// chart.cpp -- chart axiom verification and certificates.

#include "nilrect/chart.hpp"
#include "nilrect/parallel.hpp"

#include <sstream>

namespace nilrect {

GVec chart_add(const Chart& c, const GVec& a, const GVec& b) { return gvec_add(a, b, c.gamma); }
GVec chart_sub(const Chart& c, const GVec& a, const GVec& b) { return gvec_sub(a, b, c.gamma); }
GVec chart_neg(const Chart& c, const GVec& a) { return gvec_neg(a, c.gamma); }

std::vector<GroupElement> phi_image(const Chart& c, const Rect& region, const Int& budget) {
    std::vector<GroupElement> out;
    for (const GVec& v : enumerate(region, budget)) out.push_back(c.phi(v));
    return out;
}

namespace {

std::string gvec_text(const GVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.z.size(); ++i) {
        if (i) s += ",";
        s += v.z[i].str();
    }
    if (!v.t.empty()) {
        s += ";";
        for (size_t i = 0; i < v.t.size(); ++i) {
            if (i) s += ",";
            s += v.t[i].str();
        }
    }
    return s + ")";
}

constexpr size_t kMaxFailures = 8;

void add_failure(AxiomReport& a, const std::string& msg) {
    if (a.failures.size() < kMaxFailures) a.failures.push_back(msg);
}

// Does phi(r) and phi(s) lie in the same coset of H?  Trivial calH = exact
// element equality.
Tri coset_equal(const Chart& c, size_t hidx, const GroupElement& a, const GroupElement& b) {
    if (c.trivial_stabilizers()) return a == b ? Tri::Yes : Tri::No;
    return c.calH[hidx].member(multiply(invert(b), a));
}

struct PairChecker {
    const Chart& c;
    const std::vector<GVec>& zpts;

    size_t families() const { return c.trivial_stabilizers() ? 1 : c.calH.size(); }

    void check_injectivity(const GVec& r, const GVec& s, const GroupElement& pr,
                           const GroupElement& ps, AxiomReport& rep) const {
        ++rep.checked;
        bool ok = true, inconclusive = false;
        for (size_t h = 0; h < families(); ++h) {
            Tri t = coset_equal(c, h, pr, ps);
            if (t == Tri::Inconclusive) inconclusive = true;
            if (t == Tri::Yes && !(r == s)) {
                ok = false;
                add_failure(rep, "injectivity: r=" + gvec_text(r) + " s=" + gvec_text(s) +
                                 " H#" + std::to_string(h));
            }
        }
        if (inconclusive) ++rep.inconclusive;
        else if (ok) ++rep.passed;
    }

    // The existential axioms share one skeleton: hypothesis X + Zee inside
    // dom, conclusion exists z in Zee with w H = phi(X + z) H.
    void check_existential(const char* name, const GVec& X, const GroupElement& w,
                           AxiomReport& rep, const GVec& r, const GVec& s) const {
        if (!subset_of(translate(X.z, c.zee), c.dom)) {
            ++rep.skipped;
            return;
        }
        ++rep.checked;
        bool all_ok = true, any_inconclusive = false;
        for (size_t h = 0; h < families(); ++h) {
            bool found = false, inconclusive = false;
            for (const GVec& z : zpts) {
                GroupElement target = c.phi(chart_add(c, X, z));
                Tri t = c.trivial_stabilizers()
                            ? (target == w ? Tri::Yes : Tri::No)
                            : c.calH[h].member(multiply(invert(target), w));
                if (t == Tri::Yes) { found = true; break; }
                if (t == Tri::Inconclusive) inconclusive = true;
            }
            if (found) continue;
            if (inconclusive) { any_inconclusive = true; continue; }
            all_ok = false;
            add_failure(rep, std::string(name) + ": r=" + gvec_text(r) + " s=" + gvec_text(s) +
                             " X=" + gvec_text(X) + " H#" + std::to_string(h));
        }
        if (!all_ok) return;
        if (any_inconclusive) ++rep.inconclusive;
        else ++rep.passed;
    }

    void check_pair(const GVec& r, const GVec& s, std::vector<AxiomReport>& axioms) const {
        GroupElement pr = c.phi(r), ps = c.phi(s);
        check_injectivity(r, s, pr, ps, axioms[0]);
        check_existential("product", chart_add(c, r, s), multiply(pr, ps), axioms[1], r, s);
        check_existential("right-diff", chart_sub(c, r, s), multiply(pr, invert(ps)), axioms[2], r, s);
        check_existential("left-diff", chart_add(c, chart_neg(c, r), s),
                          multiply(invert(pr), ps), axioms[3], r, s);
        check_existential("inverse", chart_neg(c, s), invert(ps), axioms[4], r, s);
    }
};

std::vector<AxiomReport> fresh_axioms() {
    return {AxiomReport{"injectivity"}, AxiomReport{"product"}, AxiomReport{"right-diff"},
            AxiomReport{"left-diff"}, AxiomReport{"inverse"}};
}

void merge_axioms(std::vector<AxiomReport>& into, const std::vector<AxiomReport>& from) {
    for (size_t i = 0; i < into.size(); ++i) {
        into[i].checked += from[i].checked;
        into[i].passed += from[i].passed;
        into[i].skipped += from[i].skipped;
        into[i].inconclusive += from[i].inconclusive;
        for (const auto& f : from[i].failures) add_failure(into[i], f);
    }
}

} // namespace

ChartReport verify_chart(const Chart& c, const VerifyMode& mode, const Rect& region,
                         const Int& budget, int jobs) {
    if (!subset_of(region, c.dom))
        throw std::invalid_argument("verify_chart: region must lie inside dom");

    std::vector<GVec> pts = enumerate(region, budget);
    std::vector<GVec> zpts = enumerate(c.zee, budget);
    long long n = static_cast<long long>(pts.size());

    long long total_pairs = mode.exhaustive ? n * n : mode.trials;
    if (mode.exhaustive && Int(n) * Int(n) > budget)
        throw BudgetError(Int(n) * Int(n));

    // Sampled pair indices are drawn up front so that chunked parallel
    // execution is order-independent and byte-deterministic.
    std::vector<std::pair<long long, long long>> sampled;
    if (!mode.exhaustive) {
        Rng rng(mode.seed);
        sampled.reserve(static_cast<size_t>(mode.trials));
        for (long long i = 0; i < mode.trials; ++i)
            sampled.emplace_back(static_cast<long long>(rng.below(static_cast<std::uint64_t>(n))),
                                 static_cast<long long>(rng.below(static_cast<std::uint64_t>(n))));
    }

    PairChecker checker{c, zpts};
    int threads = effective_jobs(jobs);
    long long chunks = std::min<long long>(total_pairs, std::max(1, threads * 4));
    if (chunks == 0) chunks = 1;
    std::vector<std::vector<AxiomReport>> partial(static_cast<size_t>(chunks), fresh_axioms());

    auto run_chunk = [&](long long ci) {
        long long lo = total_pairs * ci / chunks, hi = total_pairs * (ci + 1) / chunks;
        auto& ax = partial[static_cast<size_t>(ci)];
        for (long long k = lo; k < hi; ++k) {
            long long i, j;
            if (mode.exhaustive) { i = k / n; j = k % n; }
            else { i = sampled[static_cast<size_t>(k)].first; j = sampled[static_cast<size_t>(k)].second; }
            checker.check_pair(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)], ax);
        }
    };

#ifdef NILRECT_OPENMP
    if (threads > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (long long ci = 0; ci < chunks; ++ci) run_chunk(ci);
    } else
#endif
    {
        for (long long ci = 0; ci < chunks; ++ci) run_chunk(ci);
    }

    ChartReport rep;
    rep.axioms = fresh_axioms();
    for (const auto& p : partial) merge_axioms(rep.axioms, p);
    return rep;
}

std::string ChartReport::to_text() const {
    std::ostringstream os;
    for (const auto& a : axioms) {
        os << a.name << ": " << (a.pass() ? "pass" : "FAIL") << " checked=" << a.checked
           << " passed=" << a.passed << " skipped=" << a.skipped
           << " inconclusive=" << a.inconclusive << "\n";
        for (const auto& f : a.failures) os << "  counterexample: " << f << "\n";
    }
    return os.str();
}

std::string chart_certificate(const Chart& c, const Rect& region, const ChartReport& rep) {
    std::ostringstream os;
    os << "chart-certificate v1\n";
    os << "group: " << group_to_text(c.group) << "\n";
    os << "ell: " << c.ell << "\n";
    os << "zee: " << rect_to_text(c.zee) << "\n";
    os << "dom: " << rect_to_text(c.dom) << "\n";
    os << "stabilizers: " << (c.trivial_stabilizers() ? "trivial" : std::to_string(c.calH.size())) << "\n";
    for (size_t h = 0; h < c.calH.size(); ++h) {
        os << "H#" << h << " generators:";
        for (const auto& g : c.calH[h].H.generators) os << " " << element_to_text(g);
        os << "\n";
    }
    os << "region: " << rect_to_text(region) << "\n";
    os << "note: axiom guarantees are scoped to the region above\n";
    os << rep.to_text();
    os << "result: " << (rep.all_pass() ? "pass" : "FAIL") << "\n";
    return os.str();
}

} // namespace nilrect
