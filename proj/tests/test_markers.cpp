#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilrect/markers.hpp"

#include <algorithm>
#include <set>

using namespace nilrect;

namespace {

GroupElement zelem(const GroupSpec& g, long long v) { return make_element(g, {Int(v)}); }

std::vector<GroupElement> z_ball(const GroupSpec& g, long long r) {
    std::vector<GroupElement> F;
    for (long long k = -r; k <= r; ++k) F.push_back(zelem(g, k));
    return F;
}

} // namespace

TEST_CASE("marker set with F = {1} is everything") {
    Window w = build_window(free_abelian(1), 12);
    MarkerSet m = build_marker_set(w, {identity(w.group)});
    CHECK(m.members.size() == 12);
    CHECK(verify_marker_set(w, m).pass());
}

TEST_CASE("markers on Z/100 with F = {-2..2}: invariants, gaps, and size") {
    Window w = build_window(free_abelian(1), 100);
    MarkerSet m = build_marker_set(w, z_ball(w.group, 2));
    MarkerCheck chk = verify_marker_set(w, m);
    CHECK_MESSAGE(chk.pass(), chk.witness);
    CHECK(m.members.size() >= 20);
    CHECK(m.members.size() <= 33);
    // Cyclic gaps between consecutive members lie in [3, 5]: separation
    // forbids gaps <= 2 and coverage forbids gaps >= 6.
    size_t n = m.members.size();
    for (size_t k = 0; k < n; ++k) {
        long long gap = m.members[(k + 1) % n] - m.members[k];
        if (gap <= 0) gap += 100;
        CHECK(gap >= 3);
        CHECK(gap <= 5);
    }
}

TEST_CASE("markers on the Z^2 torus N=20 with the radius-1 ball") {
    Window w = build_window(free_abelian(2), 20);
    std::vector<GroupElement> F;
    for (long long a = -1; a <= 1; ++a)
        for (long long b = -1; b <= 1; ++b) F.push_back(make_element(w.group, {Int(a), Int(b)}));
    MarkerSet m = build_marker_set(w, F);
    MarkerCheck chk = verify_marker_set(w, m);
    CHECK_MESSAGE(chk.pass(), chk.witness);
    // Exhaustive double loop, independent of verify_marker_set's sweep.
    for (long long y : m.members)
        for (long long z : m.members) {
            if (y == z) continue;
            for (const auto& g : F) CHECK(w.act(g, y) != z);
        }
}

TEST_CASE("marker freeness precondition failure names the pair") {
    Window w = build_window(free_abelian(1), 10);
    // (10) acts trivially mod 10.
    std::vector<GroupElement> F = {identity(w.group), zelem(w.group, 10), zelem(w.group, -10)};
    CHECK_THROWS_WITH_AS(build_marker_set(w, F),
                         doctest::Contains("freeness fails"), std::invalid_argument);
    // Asymmetric F is refused.
    std::vector<GroupElement> bad = {identity(w.group), zelem(w.group, 1)};
    CHECK_THROWS_AS(build_marker_set(w, bad), std::invalid_argument);
}

TEST_CASE("partition_marker on Z/12 with F = {-1,0,1}") {
    Window w = build_window(free_abelian(1), 12);
    std::vector<long long> Y(12);
    for (int i = 0; i < 12; ++i) Y[static_cast<size_t>(i)] = i;
    auto parts = partition_marker(w, z_ball(w.group, 1), Y);
    CHECK(parts.size() <= 4); // |F| + 1
    // Disjoint cover of Y, each class F-separated (gaps >= 2).
    std::set<long long> seen;
    for (const auto& part : parts) {
        for (long long y : part) CHECK(seen.insert(y).second);
        for (long long y : part)
            for (long long z : part)
                if (y != z) {
                    long long d = std::abs(y - z) % 12;
                    CHECK(d != 1);
                    CHECK(d != 11);
                }
    }
    CHECK(seen.size() == 12);
}

TEST_CASE("partition_marker class bound across random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        long long N = 5 + static_cast<long long>(rng.below(60));
        long long r = 1 + static_cast<long long>(rng.below(3));
        Window w = build_window(free_abelian(1), N);
        std::vector<GroupElement> F = z_ball(w.group, std::min(r, (N - 1) / 2));
        // Random subset Y.
        std::vector<long long> Y;
        for (long long x = 0; x < N; ++x)
            if (rng.below(2)) Y.push_back(x);
        auto parts = partition_marker(w, F, Y);
        CHECK(parts.size() <= F.size() + 1);
        size_t total = 0;
        for (const auto& p : parts) total += p.size();
        CHECK(total == Y.size());
    }
}

TEST_CASE("selector: equality relation gives the identity map") {
    Window w = build_window(free_abelian(1), 10);
    EqRel E = eqrel_equality(10);
    auto S = build_selector(w, E, {identity(w.group)});
    for (long long x = 0; x < 10; ++x) CHECK(S[static_cast<size_t>(x)] == x);
}

TEST_CASE("selector: interval classes on Z/100") {
    Window w = build_window(free_abelian(1), 100);
    std::vector<long long> labels(100);
    for (int x = 0; x < 100; ++x) labels[static_cast<size_t>(x)] = x / 10;
    EqRel E = eqrel_from_labels(labels);
    auto S = build_selector(w, E, z_ball(w.group, 9));
    for (long long x = 0; x < 100; ++x) {
        CHECK(S[static_cast<size_t>(x)] == (x / 10) * 10);            // least member
        CHECK(E.class_id[static_cast<size_t>(S[static_cast<size_t>(x)])] ==
              E.class_id[static_cast<size_t>(x)]);                    // graph(S) in E
        CHECK(S[static_cast<size_t>(S[static_cast<size_t>(x)])] ==
              S[static_cast<size_t>(x)]);                             // idempotence
    }
    // Selector laws: image meets each class exactly once.
    std::set<long long> image(S.begin(), S.end());
    CHECK(static_cast<long long>(image.size()) == E.num_classes);
    // K too small to bound the classes is refused, naming the class.
    CHECK_THROWS_WITH_AS(build_selector(w, E, z_ball(w.group, 4)),
                         doctest::Contains("not K-bounded"), std::invalid_argument);
}

TEST_CASE("marker dump is deterministic") {
    Window w = build_window(free_abelian(1), 30);
    MarkerSet m = build_marker_set(w, z_ball(w.group, 2));
    CHECK(marker_to_text(w, m) == marker_to_text(w, m));
    CHECK(marker_to_text(w, m).find("enumeration-hash") != std::string::npos);
}
