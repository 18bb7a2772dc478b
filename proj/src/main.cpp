// main.cpp -- the pipeline command line.
//
// Subcommands: verify-rects, verify-chart, markers, orthogonalize,
// free-array, e0-encode, conjugacy-demo, check-params.  Every artifact is a
// deterministic text file under --out; re-running a subcommand with the same
// scenario and seed reproduces the bytes exactly.  Exit codes: 0 when every
// assertion passes, 1 on an assertion failure (the first witness is
// printed), 2 on a parse error.

#include "nilrect/array.hpp"
#include "nilrect/rect_laws.hpp"
#include "nilrect/subgroup.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace nilrect;

namespace {

struct Options {
    std::string scenario_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool strict = false;
    int jobs = 1;
    long long budget = 0; // 0 = scenario's (or the library default)
};

void write_artifact(const Options& opt, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(opt.out_dir);
    std::ofstream out(std::filesystem::path(opt.out_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write artifact: " + name);
    out << text;
}

Scenario require_scenario(const Options& opt) {
    if (opt.scenario_path.empty())
        throw CLI::ValidationError("--scenario", "this subcommand needs a scenario file");
    return load_scenario(opt.scenario_path);
}

Int effective_budget(const Options& opt, const Scenario* s) {
    if (opt.budget > 0) return Int(opt.budget);
    if (s && s->budget > 0) return s->budget;
    return Int(50000000);
}

std::uint64_t effective_seed(const Options& opt, const Scenario* s) {
    if (opt.seed_set || !s) return opt.seed;
    return s->seed;
}

// The symmetric closure of phi(R) with the identity, as the constructions
// use it for marker and selector bounds.
std::vector<GroupElement> sym_image(const Chart& c, const Rect& R, const Int& budget) {
    std::set<GroupElement> out;
    out.insert(identity(c.group));
    for (const GVec& v : enumerate(R, budget)) {
        GroupElement g = c.phi(v);
        out.insert(g);
        out.insert(invert(g));
    }
    return std::vector<GroupElement>(out.begin(), out.end());
}

int fail(const std::string& witness) {
    std::cerr << "FAIL: " << witness << "\n";
    return 1;
}

// ---------------------------------------------------------------- commands

int cmd_verify_rects(const Options& opt, long long trials) {
    RectLawReport rep = verify_rect_laws(trials, opt.seed);
    write_artifact(opt, "rect_laws.txt", rep.to_text());
    std::cout << rep.to_text();
    if (!rep.all_pass())
        for (const auto& c : rep.clauses)
            if (!c.pass()) return fail(c.name + ": " + c.failures.front());
    return 0;
}

int cmd_check_params(const Options& opt) {
    Scenario s = require_scenario(opt);
    std::ostringstream os;
    std::string first;
    for (size_t k = 0; k < s.levels.size(); ++k) {
        ArrayLevel al = instantiate_level(s, static_cast<int>(k));
        al.prm.strict = opt.strict;
        ParamReport rep = check_parameters(al.chart, al.prm);
        os << "level " << (k + 1) << "\n" << rep.to_text();
        if (!rep.all_pass() && first.empty())
            for (const auto& c : rep.checks)
                if (c.required && !c.pass) {
                    first = "level " + std::to_string(k + 1) + ": " + c.name + " (" + c.detail +
                            ")";
                    break;
                }
    }
    write_artifact(opt, "check_params.txt", os.str());
    std::cout << os.str();
    return first.empty() ? 0 : fail(first);
}

int cmd_verify_chart(const Options& opt) {
    Scenario s = require_scenario(opt);
    Int budget = effective_budget(opt, &s);
    std::ostringstream os;
    std::string first;
    for (size_t k = 0; k < s.levels.size(); ++k) {
        ArrayLevel al = instantiate_level(s, static_cast<int>(k));
        Rect region = scale(Rat(3), al.chart.zee);
        ChartReport rep = verify_chart(al.chart, exhaustive_mode(), region, budget, opt.jobs);
        os << "level " << (k + 1) << "\n" << chart_certificate(al.chart, region, rep);
        if (!rep.all_pass() && first.empty())
            for (const auto& a : rep.axioms)
                if (!a.pass()) {
                    first = "level " + std::to_string(k + 1) + " axiom " + a.name + ": " +
                            a.failures.front();
                    break;
                }
    }
    write_artifact(opt, "chart_certificate.txt", os.str());
    std::cout << os.str();
    return first.empty() ? 0 : fail(first);
}

int cmd_markers(const Options& opt, int level) {
    Scenario s = require_scenario(opt);
    Int budget = effective_budget(opt, &s);
    ArrayLevel al = instantiate_level(s, level - 1);
    Window w = build_window(s.group, s.period);
    Int P = al.p == 0 ? reference_p(al.chart.ell) : Int(al.p);
    std::vector<GroupElement> K = sym_image(al.chart, scale(al.prm.marker_mult * P, al.A), budget);
    MarkerSet m = build_marker_set(w, K);
    MarkerCheck mc = verify_marker_set(w, m);
    auto parts = partition_marker(w, K, m.members);
    std::ostringstream os;
    os << marker_to_text(w, m);
    os << "partition classes " << parts.size() << " bound " << (K.size() + 1) << "\n";
    for (size_t i = 0; i < parts.size(); ++i)
        os << "part " << i << " size " << parts[i].size() << "\n";
    os << (mc.pass() ? "markers: pass" : "markers: FAIL " + mc.witness) << "\n";
    write_artifact(opt, "markers.txt", os.str());
    std::cout << os.str();
    if (!mc.pass()) return fail(mc.witness);
    if (parts.size() > K.size() + 1) return fail("marker partition exceeds |F|+1 classes");
    return 0;
}

int cmd_orthogonalize(const Options& opt, int level) {
    Scenario s = require_scenario(opt);
    Int budget = effective_budget(opt, &s);
    ArrayLevel al = instantiate_level(s, level - 1);
    al.prm.strict = opt.strict;
    Window w = build_window(s.group, s.period);
    OrthoResult res = build_orthogonal_relation(w, al.chart, al.prm, {}, nullptr, budget,
                                                opt.jobs);
    RectCert cert = verify_rectangular(w, res.F, al.chart, al.A, al.eps, Rat(2), nullptr, budget);
    write_artifact(opt, "ortho_relation.txt", eqrel_to_text(res.F));
    write_artifact(opt, "ortho_certificate.txt", res.certificate);
    write_artifact(opt, "rect_certificate.txt", cert.to_text());
    std::cout << "classes " << res.F.num_classes << " markers " << res.Y.members.size() << "\n";
    std::cout << (cert.pass ? "rectangular: pass" : "rectangular: FAIL " + cert.failure) << "\n";
    return cert.pass ? 0 : fail(cert.failure);
}

int cmd_free_array(const Options& opt, int columns, bool encode) {
    Scenario s = require_scenario(opt);
    Int budget = effective_budget(opt, &s);
    std::uint64_t seed = effective_seed(opt, &s);
    ArrayState a = build_free_array(s, columns, budget, opt.jobs);
    const Window& w = *a.window;
    write_artifact(opt, "array_certificate.txt", a.certificate);
    for (int n = 1; n <= columns; ++n)
        write_artifact(opt, "relation_1_" + std::to_string(n) + ".txt",
                       eqrel_to_text(a.rel(1, n)));

    // Eventual agreement over a deterministic sample of generator pairs.
    Rng rng(seed);
    std::vector<AgreementPair> pairs;
    for (size_t k = 0; k < a.levels.size(); ++k)
        for (const auto& g : a.levels[k].gens) {
            long long quota = std::min<long long>(w.num_points, 400);
            for (long long t = 0; t < quota; ++t) {
                long long x = static_cast<long long>(rng.below(
                    static_cast<std::uint64_t>(w.num_points)));
                pairs.push_back({x, w.act(g, x), static_cast<int>(k + 1)});
            }
        }
    AgreementReport ag = verify_eventual_agreement(a, pairs);
    write_artifact(opt, "agreement.txt", ag.to_text());

    // Bottom-row near-orthogonality is measured and reported, never
    // asserted: the bottom row is not expected to be pairwise orthogonal.
    {
        const ArrayLevel& l1 = a.levels.front();
        std::ostringstream os;
        os << "bottom-row orthogonality at q.A (measured, informational)\n";
        for (int m = 1; m <= columns; ++m)
            for (int n = m + 1; n <= columns; ++n) {
                OrthoCheck oc = is_orthogonal(w, a.rel(1, m), a.rel(1, n), l1.chart,
                                              scale(l1.q, l1.A), l1.dilation, nullptr, budget,
                                              opt.jobs);
                os << "columns " << m << "/" << n << ": "
                   << (oc.ok ? "orthogonal" : "not orthogonal (" + oc.witness + ")") << "\n";
            }
        write_artifact(opt, "bottom_row_orthogonality.txt", os.str());
    }

    std::cout << a.certificate << ag.to_text();
    if (!ag.pass) return fail(ag.violations.front());

    if (encode) {
        E0Code code = e0_encode(a);
        write_artifact(opt, "e0_code.txt", e0_to_text(code));
        long long cx = -1, cy = -1;
        bool inj = e0_injective(code, &cx, &cy);
        std::ostringstream os;
        os << "points " << code.bits.size() << " blocks " << code.widths.size() << " bits "
           << code.offsets.back() << "\n";
        os << (inj ? "injective: pass"
                   : "injective: FAIL x=" + std::to_string(cx) + " y=" + std::to_string(cy))
           << "\n";
        write_artifact(opt, "e0_summary.txt", os.str());
        std::cout << os.str();
        if (!inj)
            return fail("e0 code collision at x=" + std::to_string(cx) + " y=" +
                        std::to_string(cy));
    }
    return 0;
}

int cmd_conjugacy(const Options& opt, int nfac, long long bound) {
    GroupSpec G = truncated_sum(heisenberg(), nfac);
    auto factor_gen = [&](int i, int coord) {
        std::vector<Int> cs(static_cast<size_t>(G.num_coords()), Int(0));
        cs[static_cast<size_t>(3 * i + coord)] = 1;
        return make_element(G, cs);
    };
    // The basic commutation identity in factor 0.
    GroupElement a0 = factor_gen(0, 0), b0 = factor_gen(0, 1), c0 = factor_gen(0, 2);
    bool identity_ok = multiply(multiply(b0, invert(a0)), invert(b0)) ==
                       multiply(invert(a0), c0);

    std::ostringstream os;
    os << "conjugacy demo: n " << nfac << " bound " << bound << "\n";
    os << "identity b0 a0^-1 b0^-1 = a0^-1 c0: " << (identity_ok ? "pass" : "FAIL") << "\n";
    bool all_ok = identity_ok;
    std::string first = identity_ok ? "" : "factor identity failed";

    const int total = 1 << nfac;
    for (int xi = 0; xi < total; ++xi)
        for (int yi = 0; yi < total; ++yi) {
            std::vector<int> x(static_cast<size_t>(nfac)), y(static_cast<size_t>(nfac));
            for (int i = 0; i < nfac; ++i) {
                x[static_cast<size_t>(i)] = (xi >> i) & 1;
                y[static_cast<size_t>(i)] = (yi >> i) & 1;
            }
            ConjugatorResult r = conjugator_search(hx_subgroup(x), hx_subgroup(y), Int(bound));
            os << "x=" << xi << " y=" << yi << " status " << tri_name(r.status);
            if (r.g) os << " g " << element_to_text(*r.g);
            os << "\n";
            if (r.status != Tri::Yes) {
                all_ok = false;
                if (first.empty())
                    first = "pair x=" + std::to_string(xi) + " y=" + std::to_string(yi) + ": " +
                            r.note;
            }
        }

    // Support restricted away from a disagreement coordinate: definitive No.
    if (nfac >= 2) {
        std::vector<int> x(static_cast<size_t>(nfac), 0), y = x;
        y[0] = 1;                      // disagreement at factor 0
        std::vector<int> support{1};   // the search may not touch factor 0
        ConjugatorResult r = conjugator_search(hx_subgroup(x), hx_subgroup(y), Int(bound),
                                               support, 2);
        os << "restricted-support search across the disagreement: " << tri_name(r.status)
           << "\n";
        if (r.status != Tri::No) {
            all_ok = false;
            if (first.empty()) first = "restricted-support search did not return No";
        }
    }
    write_artifact(opt, "conjugacy_demo.txt", os.str());
    std::cout << os.str();
    return all_ok ? 0 : fail(first);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rectangular-relation pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--scenario", opt.scenario_path, "scenario file");
    app.add_option("--out", opt.out_dir, "artifact output directory");
    auto* seed_opt = app.add_option("--seed", opt.seed, "PRNG seed (overrides the scenario's)");
    app.add_flag("--strict-constants", opt.strict,
                 "paper mode: reference constants, symbolic checks only");
    app.add_option("--jobs", opt.jobs, "worker threads (0 = all, 1 = serial)");
    app.add_option("--budget", opt.budget, "enumeration budget in points");

    long long trials = 10000;
    int level = 1;
    int columns = 0;
    int nfac = 3;
    long long bound = 5;

    auto* c_rects = app.add_subcommand("verify-rects", "rectangle-law property sweep");
    c_rects->add_option("--trials", trials, "instances per clause");
    auto* c_chart = app.add_subcommand("verify-chart", "chart axioms per level");
    auto* c_markers = app.add_subcommand("markers", "marker set and partition");
    c_markers->add_option("--level", level, "chain level (1-based)");
    auto* c_ortho = app.add_subcommand("orthogonalize", "orthogonalizing construction");
    c_ortho->add_option("--level", level, "chain level (1-based)");
    auto* c_array = app.add_subcommand("free-array", "diagonalization array");
    c_array->add_option("--columns", columns, "number of columns");
    auto* c_e0 = app.add_subcommand("e0-encode", "array plus the finite coding map");
    c_e0->add_option("--columns", columns, "number of columns");
    auto* c_conj = app.add_subcommand("conjugacy-demo", "conjugator search table");
    c_conj->add_option("--n", nfac, "number of heisenberg factors");
    c_conj->add_option("--bound", bound, "membership ball radius");
    auto* c_params = app.add_subcommand("check-params", "construction hypothesis inequalities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    opt.seed_set = seed_opt->count() > 0;

    try {
        if (*c_rects) return cmd_verify_rects(opt, trials);
        if (*c_chart) return cmd_verify_chart(opt);
        if (*c_markers) return cmd_markers(opt, level);
        if (*c_ortho) return cmd_orthogonalize(opt, level);
        if (*c_array) return cmd_free_array(opt, columns > 0 ? columns : 3, false);
        if (*c_e0) return cmd_free_array(opt, columns > 0 ? columns : 3, true);
        if (*c_conj) return cmd_conjugacy(opt, nfac, bound);
        if (*c_params) return cmd_check_params(opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::string what = e.what();
        if (what.find("bad scenario file") != std::string::npos ||
            what.find("cannot open scenario file") != std::string::npos) {
            std::cerr << what << "\n";
            return 2;
        }
        return fail(what);
    }
    return 2;
}
