#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilrect/chart.hpp"
#include "nilrect/group.hpp"
#include "nilrect/scenario.hpp"
#include "nilrect/window.hpp"

#include <algorithm>
#include <memory>
#include <set>

using namespace nilrect;

namespace {

GroupElement elem(const GroupSpec& g, std::vector<long long> c) {
    std::vector<Int> v(c.begin(), c.end());
    return make_element(g, std::move(v));
}

GroupElement random_element(const GroupSpec& g, Rng& rng, long long bound) {
    std::vector<Int> c;
    for (int i = 0; i < g.num_coords(); ++i) c.push_back(Int(rng.range(-bound, bound)));
    return make_element(g, std::move(c));
}

} // namespace

TEST_CASE("free window is an action: identity and compatibility laws") {
    for (const GroupSpec& G : {free_abelian(2), heisenberg(), product({cyclic(4), free_abelian(1)})}) {
        Window w = build_window(G, 6);
        Rng rng(12345);
        GroupElement e = identity(G);
        for (int t = 0; t < 10000; ++t) {
            long long x = static_cast<long long>(rng.below(static_cast<std::uint64_t>(w.num_points)));
            GroupElement g = random_element(G, rng, 20);
            GroupElement h = random_element(G, rng, 20);
            CHECK(w.act(e, x) == x);
            CHECK(w.act(multiply(g, h), x) == w.act(g, w.act(h, x)));
        }
    }
}

TEST_CASE("free window action is free and transitive") {
    Window w = build_window(heisenberg(), 4);
    CHECK(w.num_points == 64);
    // Transitive: the orbit of 0 is everything.
    std::set<long long> orbit;
    for (long long a = 0; a < 4; ++a)
        for (long long b = 0; b < 4; ++b)
            for (long long c = 0; c < 4; ++c)
                orbit.insert(w.act(elem(w.group, {a, b, c}), 0));
    CHECK(orbit.size() == 64);
    // Free on a probe set: nontrivial small elements fix nothing.
    std::vector<GroupElement> F;
    for (long long a = -1; a <= 1; ++a)
        for (long long b = -1; b <= 1; ++b)
            for (long long c = -1; c <= 1; ++c)
                if (a || b || c) F.push_back(elem(w.group, {a, b, c}));
    CHECK(check_local_freeness(w, F).pass());
    // ...but an element of the period lattice fixes everything.
    FreenessReport bad = check_local_freeness(w, {elem(w.group, {4, 0, 0})});
    CHECK(!bad.pass());
}

TEST_CASE("coset window: Z^2 mod the first axis has N points") {
    GroupSpec G = free_abelian(2);
    Subgroup H{G, {elem(G, {1, 0})}};
    Window w = build_coset_window(G, H, 10);
    CHECK(w.num_points == 10);
    // Acting by (1,0) fixes every coset; acting by (0,1) permutes them freely.
    GroupElement h = elem(G, {1, 0});
    GroupElement v = elem(G, {0, 1});
    for (long long x = 0; x < w.num_points; ++x) {
        CHECK(w.act(h, x) == x);
        CHECK(w.act(v, x) != x);
    }
}

TEST_CASE("coset window: heisenberg mod center") {
    GroupSpec G = heisenberg();
    Subgroup H{G, {elem(G, {0, 0, 1})}};
    Window w = build_coset_window(G, H, 4);
    CHECK(w.num_points == 16);
    // The center fixes every point; the stabilizer of the identity coset is
    // exactly the periodized center on a probe set.
    std::vector<GroupElement> probes;
    for (long long a = -2; a <= 2; ++a)
        for (long long b = -2; b <= 2; ++b)
            for (long long c = -2; c <= 2; ++c)
                probes.push_back(elem(G, {a, b, c}));
    long long x0 = w.class_of[static_cast<size_t>(w.reduce_rank(identity(G)))];
    for (const auto& s : stabilizer_probes(w, x0, probes)) {
        CHECK(s.coords[0] % 4 == 0);
        CHECK(s.coords[1] % 4 == 0);
    }
    // Probe elements of the center always stabilize.
    CHECK(w.act(elem(G, {0, 0, 2}), x0) == x0);
}

TEST_CASE("points_with_stabilizer: trivial family selects free points") {
    Window w = build_window(free_abelian(1), 8);
    std::vector<GroupElement> probes = {elem(w.group, {1}), elem(w.group, {8})};
    // (8) fixes everything but is not in the (empty) family, so no point
    // passes the filter with that probe included.
    CHECK(points_with_stabilizer(w, {}, probes).empty());
    // With only non-period probes every point passes.
    CHECK(points_with_stabilizer(w, {}, {elem(w.group, {1})}).size() == 8);
}

TEST_CASE("realize_chart tabulates the action faithfully") {
    GroupSpec G = free_abelian(2);
    auto c = std::make_shared<Chart>(build_abelian_chart(G, {Int(1), Int(1)}, Rat(8)));
    auto w = std::make_shared<Window>(build_window(G, 40));
    Rect region = rec_uniform(2, GammaSpec{}, Int(5));
    RealizedChart r = realize_chart(c, w, region);
    CHECK(r.vpts.size() == 121);
    for (size_t vi = 0; vi < r.vpts.size(); vi += 17) {
        for (long long x = 0; x < w->num_points; x += 101) {
            long long y = r.forward(vi, x);
            CHECK(y == w->act(c->phi(r.vpts[vi]), x));
            CHECK(r.find_v(x, y) == static_cast<int>(vi));
        }
    }
}

TEST_CASE("realize_chart rejects a period smaller than the region") {
    GroupSpec G = free_abelian(1);
    auto c = std::make_shared<Chart>(build_abelian_chart(G, {Int(1)}, Rat(20)));
    auto w = std::make_shared<Window>(build_window(G, 15));
    // Radius 10 spans 21 points; mod 15 the map v -> v + x wraps and collides.
    Rect region = rec_uniform(1, GammaSpec{}, Int(10));
    CHECK_THROWS_AS(realize_chart(c, w, region), std::runtime_error);
    // Radius 7 spans 15 points = period: still injective (exactly one lap).
    Rect ok = rec_uniform(1, GammaSpec{}, Int(7));
    RealizedChart r = realize_chart(c, w, ok);
    CHECK(r.vpts.size() == 15);
}

TEST_CASE("realize_chart budget refusal") {
    GroupSpec G = free_abelian(1);
    auto c = std::make_shared<Chart>(build_abelian_chart(G, {Int(1)}, Rat(100)));
    auto w = std::make_shared<Window>(build_window(G, 1000));
    CHECK_THROWS_AS(realize_chart(c, w, rec_uniform(1, GammaSpec{}, Int(50)), Int(100)), BudgetError);
}

TEST_CASE("scenario text round-trips bit-exactly") {
    Scenario s;
    s.group = free_abelian(2);
    s.period = 7500;
    s.seed = 424242;
    s.budget = Int(100000);
    LevelSpec L1;
    L1.generators = {elem(s.group, {1, 0})};
    L1.zee = {Int(1)};
    L1.A = {Int(72)};
    L1.epsilon = Rat(1, 2);
    L1.q = Rat(1, 100);
    L1.p = 4;
    LevelSpec L2;
    L2.generators = {elem(s.group, {1, 0}), elem(s.group, {0, 1})};
    L2.zee = {Int(1), Int(1)};
    L2.A = {Int(72), Int(72)};
    L2.epsilon = Rat(1, 3);
    L2.q = Rat(1, 200);
    L2.p = 4;
    L2.knobs.partition_mult = Rat(10);
    L2.knobs.ortho_dilation = Rat(12);
    s.levels = {L1, L2};

    std::string text = scenario_to_text(s);
    std::string err;
    auto back = scenario_from_text(text, &err);
    REQUIRE_MESSAGE(back.has_value(), err);
    CHECK(*back == s);
    CHECK(scenario_to_text(*back) == text);
}

TEST_CASE("scenario parser reports malformed input") {
    std::string err;
    CHECK(!scenario_from_text("version 1\ngroup Z\n", &err).has_value());
    CHECK(err == "missing end marker");
    CHECK(!scenario_from_text("version 2\nend\n", &err).has_value());
    CHECK(!scenario_from_text("version 1\ngroup Z\nlevels 1\nend\n", &err).has_value());
    CHECK(!scenario_from_text("version 1\ngroup Z\nlevels 0\nlevel 1\nend\n", &err).has_value());
}

TEST_CASE("validate_scales flags bad constants and passes sane ones") {
    Scenario s;
    s.group = free_abelian(1);
    s.period = 7500;
    s.seed = 1;
    s.budget = Int(1000000);
    LevelSpec L;
    L.generators = {elem(s.group, {1})};
    L.zee = {Int(1)};
    L.A = {Int(72)};
    L.epsilon = Rat(1, 2);
    L.q = Rat(1, 100);
    L.p = 4;
    s.levels = {L};
    ScaleReport rep = validate_scales(s);
    CHECK(rep.all_pass());
    // The reference-constant note should mark this level as symbolic-only.
    bool saw_note = false;
    for (const auto& c : rep.checks)
        if (c.name.find("reference-constant") != std::string::npos) {
            saw_note = true;
            CHECK(c.detail.find("unenumerable") != std::string::npos);
        }
    CHECK(saw_note);

    // Breaking the period makes the diameter check fail.
    Scenario bad = s;
    bad.period = 100;
    CHECK(!validate_scales(bad).all_pass());
    // epsilon out of range fails.
    bad = s;
    bad.levels[0].epsilon = Rat(3, 2);
    CHECK(!validate_scales(bad).all_pass());
}
