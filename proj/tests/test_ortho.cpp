#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilrect/ortho.hpp"

#include <algorithm>
#include <set>

using namespace nilrect;

namespace {

struct Line {
    Window w;
    Chart c;
    Line(long long N, long long dom_radius)
        : w(build_window(free_abelian(1), N)),
          c(build_abelian_chart(free_abelian(1), {Int(1)}, Rat(dom_radius))) {}
};

Rect centered1(const Int& r) { return rec(GammaSpec{}, {r}); }

EqRel intervals(long long N, long long len) {
    std::vector<long long> labels(static_cast<size_t>(N));
    for (long long x = 0; x < N; ++x) labels[static_cast<size_t>(x)] = x / len;
    return eqrel_from_labels(labels);
}

// The relaxed l = 1 testbed.  The period 13237 = 61 * 217 is an exact
// multiple of the greedy marker step (3p/4 . 8 . 36 = 216, so consecutive
// markers sit 217 apart), which keeps the marker set seam-free on the
// circle.  The existing relation's cuts also sit on multiples of 217, so
// every marker sees its boundary at distances = 0 or +-1 mod 217 and the
// clause (iii) intervals clear the low end of the d-range; dom must exceed
// the relation's class span so witness searches can see whole classes.
struct Bed {
    Line L{13237, 4600};
    Rect A = centered1(36);
    Rat eps{1, 9};
    OrthoParams prm;
    EqRel E1 = intervals(13237, 4340);
    Bed() {
        prm.A = A;
        prm.eps = eps;
        prm.q = Rat(1, 36);
        prm.b = 1;
        prm.p = 8;
        prm.guard2 = Rat(73, 36);
    }
};

} // namespace

TEST_CASE("strict q-bound reproduces the exact reference value for l=1, b=2") {
    CHECK(strict_q_bound(1, 2) == Rat(Int(1), Int("10267656192")));
    CHECK(strict_q_bound(1, 1) == Rat(Int(1), Int("5133828096")));
}

TEST_CASE("check_parameters in strict mode: a passing set and forced failures") {
    // Symbolic chart: huge dom, no enumeration happens.
    Int a = Int(42467328) * Int("1000000000000");
    Chart c = build_abelian_chart(free_abelian(1), {Int(1)}, Rat(a * (Int(1) << 41)));
    OrthoParams prm;
    prm.A = centered1(a);
    prm.eps = Rat(1, Int("1000000000000"));
    prm.q = Rat(1, Int("20000000000"));
    prm.b = 2;
    prm.strict = true;
    ParamReport rep = check_parameters(c, prm);
    CHECK_MESSAGE(rep.all_pass(), rep.to_text());
    CHECK(rep.to_text().find("10267656192") != std::string::npos);

    // eps = q forces the lower window end to fail.
    OrthoParams bad = prm;
    bad.eps = bad.q;
    ParamReport r2 = check_parameters(c, bad);
    CHECK(!r2.all_pass());
    bool found = false;
    for (const auto& chk : r2.checks)
        if (chk.name == "8 eps < q") {
            found = true;
            CHECK(!chk.pass);
        }
    CHECK(found);

    // q just above the bound fails the upper window end.
    OrthoParams bad2 = prm;
    bad2.q = Rat(1, Int("10267656191"));
    ParamReport r3 = check_parameters(c, bad2);
    CHECK(!r3.all_pass());
}

TEST_CASE("check_parameters in relaxed mode gates the configured analogues") {
    Bed bed;
    OrthoParams prm = bed.prm;
    prm.neighbor_bound = Int(4);
    prm.cluster_bound = Int(2);
    ParamReport rep = check_parameters(bed.L.c, prm);
    CHECK_MESSAGE(rep.all_pass(), rep.to_text());
    // The reference-only inequalities are reported but do not gate.
    long long informational = 0;
    for (const auto& chk : rep.checks)
        if (!chk.required) ++informational;
    CHECK(informational >= 2);

    // Shrinking dom below the working region flips the required dom check.
    Line tiny(13200, 3000);
    ParamReport r2 = check_parameters(tiny.c, prm);
    CHECK(!r2.all_pass());
}

TEST_CASE("build_orthogonal_relation with no existing relations re-certifies") {
    Bed bed;
    OrthoResult res =
        build_orthogonal_relation(bed.L.w, bed.L.c, bed.prm, {}, nullptr, Int(50000000), 0);

    // Markers behave: independent invariant check.
    CHECK(verify_marker_set(bed.L.w, res.Y).pass());
    CHECK(res.Y.members.size() >= 2);
    // Clause (i): p a_i <= d_i <= 2 p a_i.
    for (const auto& dy : res.d) {
        REQUIRE(dy.size() == 1);
        CHECK(dy[0] >= 288);
        CHECK(dy[0] <= 576);
    }
    // The lemma's conclusion, checked by the independent verifier.
    RectCert cert = verify_rectangular(bed.L.w, res.F, bed.L.c, bed.A, bed.eps, Rat(2));
    CHECK_MESSAGE(cert.pass, cert.failure);

    // Determinism: a rerun is byte-identical.
    OrthoResult res2 =
        build_orthogonal_relation(bed.L.w, bed.L.c, bed.prm, {}, nullptr, Int(50000000), 0);
    CHECK(res.certificate == res2.certificate);
    CHECK(res.F.class_id == res2.F.class_id);
}

TEST_CASE("build_orthogonal_relation against an interval relation: full round-trip") {
    Bed bed;
    // The existing relation must come with its own independent certificate.
    RectCert certE = verify_rectangular(bed.L.w, bed.E1, bed.L.c, bed.A, bed.eps, Rat(3, 2));
    REQUIRE_MESSAGE(certE.pass, certE.failure);

    OrthoResult res = build_orthogonal_relation(bed.L.w, bed.L.c, bed.prm, {{bed.E1, certE}},
                                                nullptr, Int(50000000), 0);

    // Conclusion 1: F is rectangular (independent verifier).
    RectCert cert = verify_rectangular(bed.L.w, res.F, bed.L.c, bed.A, bed.eps, Rat(2));
    CHECK_MESSAGE(cert.pass, cert.failure);

    // Conclusion 2: F is orthogonal to E1 at q.A (independent sweep).
    Rect qA = scale(bed.prm.q, bed.A);
    OrthoCheck oc = is_orthogonal(bed.L.w, bed.E1, res.F, bed.L.c, qA);
    CHECK_MESSAGE(oc.ok, oc.witness);

    // F refines the cover-generated relation: same class implies identical
    // membership in every R_y (audited from scratch via phi_orbit).
    for (size_t m = 0; m < res.Y.members.size(); m += 7) {
        Rect D = rec(GammaSpec{}, res.d[m]);
        std::vector<long long> Ry = phi_orbit(bed.L.w, bed.L.c, D, res.Y.members[m]);
        std::vector<char> in(static_cast<size_t>(13237), 0);
        for (long long x : Ry) in[static_cast<size_t>(x)] = 1;
        for (long long x = 0; x + 1 < 13237; ++x)
            if (res.F.class_id[static_cast<size_t>(x)] ==
                res.F.class_id[static_cast<size_t>(x + 1)])
                CHECK(in[static_cast<size_t>(x)] == in[static_cast<size_t>(x + 1)]);
    }

    // Cluster counts of the input relation stay under the reference bound.
    ClusterReport cr = count_boundary_clusters(bed.L.w, bed.E1, bed.L.c, bed.A, Rat(1, 100),
                                               Rat(1, 10), 1, 0, Rat(2), Rat(2));
    CHECK(Int(cr.observed) <= cr.bound);
}

TEST_CASE("per-point bound violations are named") {
    Bed bed;
    RectCert certE = verify_rectangular(bed.L.w, bed.E1, bed.L.c, bed.A, bed.eps, Rat(3, 2));
    REQUIRE(certE.pass);
    // Two copies of the same relation exceed b = 1 near the cuts.
    CHECK_THROWS_WITH_AS(
        build_orthogonal_relation(bed.L.w, bed.L.c, bed.prm, {{bed.E1, certE}, {bed.E1, certE}},
                                  nullptr, Int(50000000), 0),
        doctest::Contains("per-point bound violated"), std::invalid_argument);
}

TEST_CASE("inadmissible d is reported with the forbidden intervals") {
    Bed bed;
    RectCert certE = verify_rectangular(bed.L.w, bed.E1, bed.L.c, bed.A, bed.eps, Rat(3, 2));
    REQUIRE(certE.pass);
    OrthoParams wide = bed.prm;
    wide.guard3 = Rat(2000); // clause (iii) intervals swallow the whole range
    CHECK_THROWS_WITH_AS(build_orthogonal_relation(bed.L.w, bed.L.c, wide, {{bed.E1, certE}},
                                                   nullptr, Int(50000000), 0),
                         doctest::Contains("no admissible d_1"), std::runtime_error);
}

TEST_CASE("is_orthogonal: self-intersection, offset intervals, dom refusal") {
    Line L(300, 100);
    EqRel E = intervals(300, 150);
    // Offset copy by half a class length.
    std::vector<long long> labels(300);
    for (long long x = 0; x < 300; ++x) labels[static_cast<size_t>(x)] = ((x + 75) % 300) / 150;
    EqRel F = eqrel_from_labels(labels);

    Rect A1 = centered1(Int(1));
    OrthoCheck self = is_orthogonal(L.w, E, E, L.c, A1);
    CHECK(!self.ok);
    CHECK(self.witness.find("axis 1") != std::string::npos);

    OrthoCheck off = is_orthogonal(L.w, E, F, L.c, A1);
    CHECK_MESSAGE(off.ok, off.witness);

    CHECK_THROWS_AS(is_orthogonal(L.w, E, F, L.c, centered1(Int(50))), std::invalid_argument);
}

TEST_CASE("verify_orthoseq: failure counts and hypothesis refusals") {
    Line L(300, 100);
    EqRel E = intervals(300, 150);
    std::vector<long long> labels(300);
    for (long long x = 0; x < 300; ++x) labels[static_cast<size_t>(x)] = ((x + 75) % 300) / 150;
    EqRel F = eqrel_from_labels(labels);

    // Exhaustive adjacent pairs (Zee has radius 1).
    std::vector<std::pair<long long, long long>> pairs;
    for (long long x = 0; x < 300; ++x) pairs.emplace_back(x, (x + 1) % 300);
    Rect A = centered1(Int(400));
    OrthoSeqReport rep = verify_orthoseq(L.w, {E, F}, L.c, A, Rat(1, 1000), Rat(1, 25), pairs);
    CHECK(rep.pass);
    CHECK(rep.pairs_checked == 300);
    CHECK(rep.max_failures == 1);

    // x = y: zero failures.
    OrthoSeqReport same =
        verify_orthoseq(L.w, {E, F}, L.c, A, Rat(1, 1000), Rat(1, 25), {{7, 7}});
    CHECK(same.max_failures == 0);

    CHECK_THROWS_WITH_AS(
        verify_orthoseq(L.w, {E, F}, L.c, A, Rat(1, 10), Rat(1, 25), pairs),
        doctest::Contains("12 eps < q"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        verify_orthoseq(L.w, {E, F}, L.c, A, Rat(1, 1000), Rat(1, 2), pairs),
        doctest::Contains("q < 1/(24 l)"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        verify_orthoseq(L.w, {E, F}, L.c, A, Rat(1, 2), Rat(1, 25), pairs),
        doctest::Contains("eps < 1/4"), std::invalid_argument);
    // A sampled pair outside phi(Zee).x is refused.
    CHECK_THROWS_WITH_AS(
        verify_orthoseq(L.w, {E, F}, L.c, A, Rat(1, 1000), Rat(1, 25), {{0, 5}}),
        doctest::Contains("not in phi(Zee).x"), std::invalid_argument);
}
