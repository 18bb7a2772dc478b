// Tests for chart verification and the two chart constructions.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilrect/chart.hpp"

#include <algorithm>

using namespace nilrect;

namespace {

std::vector<GroupElement> heis_generators() {
    GroupSpec H = heisenberg();
    return {make_element(H, {Int(1), Int(0), Int(0)}),
            make_element(H, {Int(0), Int(1), Int(0)}),
            make_element(H, {Int(0), Int(0), Int(1)})};
}

// A deliberately undersized Heisenberg chart: phi is the coordinate map,
// but the error rectangle is too small to absorb the product error -r2*s1.
Chart undersized_heis_chart(const Int& z_radius, const Int& dom_radius) {
    Chart c;
    c.group = heisenberg();
    c.ell = 3;
    c.zee = rec(GammaSpec{}, {Int(1), Int(1), z_radius});
    c.dom = rec(GammaSpec{}, {dom_radius, dom_radius, dom_radius * dom_radius + dom_radius});
    GroupSpec G = c.group;
    c.phi = [G](const GVec& v) { return make_element(G, {v.z[0], v.z[1], v.z[2]}); };
    return c;
}

} // namespace

TEST_CASE("abelian chart passes exhaustively") {
    Chart c = build_abelian_chart(free_abelian(2), {Int(1), Int(1)}, Rat(100));
    CHECK(c.dom.radius == std::vector<Int>{Int(100), Int(100)});
    CHECK(is_identity(c.phi(gvec_zero(2, c.gamma))));

    Rect region = rec(c.gamma, {Int(4), Int(4)});
    ChartReport rep = verify_chart(c, exhaustive_mode(), region);
    INFO(rep.to_text());
    CHECK(rep.all_pass());
    CHECK(rep.axioms[1].checked > 0);
}

TEST_CASE("abelian chart carries torsion") {
    GroupSpec G = product({free_abelian(1), cyclic(Int(3))});
    Chart c = build_abelian_chart(G, {Int(2)}, Rat(5));
    CHECK(c.gamma.orders == std::vector<Int>{Int(3)});
    GVec v = gvec_zero(1, c.gamma);
    v.z[0] = 2;
    v.t[0] = 2;
    GroupElement g = c.phi(v);
    CHECK(g.coords == std::vector<Int>{Int(2), Int(2)});
    ChartReport rep = verify_chart(c, exhaustive_mode(), c.zee);
    CHECK(rep.all_pass());
}

TEST_CASE("undersized error rectangle is caught with a counterexample") {
    Chart c = undersized_heis_chart(Int(1), Int(3));
    ChartReport rep = verify_chart(c, exhaustive_mode(), rec(GammaSpec{}, {Int(3), Int(3), Int(3)}));
    INFO(rep.to_text());
    CHECK(!rep.all_pass());
    CHECK(!rep.axioms[1].failures.empty()); // the product axiom names an (r, s)
}

TEST_CASE("free chart for the heisenberg group") {
    GroupSpec H = heisenberg();
    Chart c = build_chart_free(H, heis_generators(), Rat(3));
    CHECK(c.ell == hirsch_length(H));
    CHECK(c.trivial_stabilizers());
    CHECK(is_identity(c.phi(gvec_zero(c.ell, c.gamma))));

    // Anisotropy: the central radius dominates the product of the quotient radii.
    CHECK(c.zee.radius[2] > c.zee.radius[0] * c.zee.radius[1]);

    // lambda * Zee inside dom, F inside phi(Zee).
    CHECK(subset_of(scale(Rat(3), c.zee), c.dom));
    auto img = phi_image(c, c.zee, Int(200000));
    for (const auto& f : heis_generators())
        CHECK(std::find(img.begin(), img.end(), f) != img.end());

    // Exhaustive verification on a working region.
    Rect region = rec(GammaSpec{}, {Int(1), Int(1), Int(5)});
    ChartReport rep = verify_chart(c, exhaustive_mode(), region, Int(4000000), 0);
    INFO(rep.to_text());
    CHECK(rep.all_pass());

    // phi_inv inverts phi.
    REQUIRE(c.phi_inv);
    for (const GVec& v : enumerate(region, Int(10000))) {
        auto back = c.phi_inv(c.phi(v));
        REQUIRE(back.has_value());
        CHECK(*back == v);
    }
}

TEST_CASE("free chart reduces to the abelian chart on Z^n") {
    GroupSpec G = free_abelian(3);
    std::vector<GroupElement> F{make_element(G, {Int(2), Int(-1), Int(0)})};
    Chart c = build_chart_free(G, F, Rat(4));
    CHECK(c.ell == 3);
    CHECK(c.zee.radius == std::vector<Int>{Int(2), Int(1), Int(1)});
    CHECK(verify_chart(c, exhaustive_mode(), c.zee).all_pass());
}

TEST_CASE("span chart: exact inverse through the Smith form, refusals") {
    GroupSpec G = free_abelian(3);
    // Independent, non-axis-aligned generators of a rank-2 sublattice.
    std::vector<GroupElement> gens{make_element(G, {Int(2), Int(1), Int(0)}),
                                   make_element(G, {Int(0), Int(3), Int(1)})};
    Chart c = build_span_chart(G, gens, {Int(1), Int(1)}, {Int(20), Int(20)});
    CHECK(c.ell == 2);
    CHECK(c.linear);
    CHECK(verify_chart(c, exhaustive_mode(), rec(GammaSpec{}, {Int(4), Int(4)})).all_pass());
    // phi_inv is exact on the lattice and empty off it.
    for (long long a = -5; a <= 5; ++a)
        for (long long b = -5; b <= 5; ++b) {
            GVec v{{Int(a), Int(b)}, {}};
            auto back = c.phi_inv(c.phi(v));
            REQUIRE(back.has_value());
            CHECK(back->z == v.z);
        }
    CHECK(!c.phi_inv(make_element(G, {Int(1), Int(0), Int(0)})).has_value());
    CHECK(!c.phi_inv(make_element(G, {Int(2), Int(1), Int(1)})).has_value());

    // Dependent generators are refused.
    std::vector<GroupElement> dep{make_element(G, {Int(1), Int(0), Int(0)}),
                                  make_element(G, {Int(2), Int(0), Int(0)})};
    CHECK_THROWS_AS(build_span_chart(G, dep, {Int(1), Int(1)}, {Int(20), Int(20)}),
                    std::invalid_argument);
    // Non-abelian ambient is refused.
    CHECK_THROWS_AS(build_span_chart(heisenberg(), heis_generators(),
                                     {Int(1), Int(1), Int(1)}, {Int(9), Int(9), Int(9)}),
                    std::invalid_argument);
    // dom must contain 3.Zee.
    CHECK_THROWS_AS(build_span_chart(G, gens, {Int(2), Int(2)}, {Int(5), Int(20)}),
                    std::invalid_argument);
}

TEST_CASE("free chart K computation covers the quadratic product error") {
    // Over a quotient region of radius m the product error's central
    // coordinate reaches m^2, so the central radius must exceed it.
    GroupSpec H = heisenberg();
    Chart c = build_chart_free(H, heis_generators(), Rat(3));
    Int m = c.dom.radius[0];
    CHECK(c.zee.radius[2] > m * m);
}

TEST_CASE("general chart: abelian base case") {
    GroupSpec G = free_abelian(2);
    Subgroup H{G, {make_element(G, {Int(1), Int(0)})}};
    Chart c = build_chart_general(G, {H}, {make_element(G, {Int(0), Int(2)})}, Rat(4), Rat(3));
    CHECK(c.ell == 1);
    REQUIRE(c.calH.size() == 1);
    CHECK(c.calH[0].member(make_element(G, {Int(5), Int(0)})) == Tri::Yes);
    CHECK(c.calH[0].member(make_element(G, {Int(0), Int(1)})) == Tri::No);
    ChartReport rep = verify_chart(c, exhaustive_mode(), c.dom);
    INFO(rep.to_text());
    CHECK(rep.all_pass());
}

TEST_CASE("general chart: heisenberg modulo its center") {
    GroupSpec G = heisenberg();
    Subgroup Z{G, {make_element(G, {Int(0), Int(0), Int(1)})}};
    std::vector<GroupElement> F = heis_generators();
    Chart c = build_chart_general(G, {Z}, F, Rat(3), Rat(3));
    CHECK(c.ell <= hirsch_length(G));
    CHECK(c.ell == 2); // the central direction collapses
    REQUIRE(c.calH.size() == 1); // the center is normal: a singleton closure
    CHECK(is_identity(c.phi(gvec_zero(c.ell, c.gamma))));

    // F inside phi(Zee) H.
    for (const auto& f : F) {
        bool covered = false;
        for (const auto& g : phi_image(c, c.zee, Int(100000)))
            if (c.calH[0].member(multiply(invert(g), f)) == Tri::Yes) { covered = true; break; }
        CHECK(covered);
    }

    // phi(u) Z phi(u)^{-1} stays in calH for u in eta * Zee.
    for (const GVec& u : enumerate(scale(Rat(3), c.zee), Int(100000))) {
        GroupElement g = c.phi(u);
        for (const auto& h : Z.generators) {
            GroupElement hc = conjugate(h, g);
            CHECK(c.calH[0].member(hc) == Tri::Yes);
        }
    }

    ChartReport rep = verify_chart(c, exhaustive_mode(), scale(Rat(3), c.zee));
    INFO(rep.to_text());
    CHECK(rep.all_pass());
}

TEST_CASE("chart evaluation is deterministic") {
    GroupSpec H = heisenberg();
    Chart a = build_chart_free(H, heis_generators(), Rat(3));
    Chart b = build_chart_free(H, heis_generators(), Rat(3));
    CHECK(a.zee == b.zee);
    CHECK(a.dom == b.dom);
    for (const GVec& v : enumerate(a.zee, Int(100000))) CHECK(a.phi(v) == b.phi(v));
}

TEST_CASE("parallel and serial verification agree") {
    Chart c = build_chart_free(heisenberg(), heis_generators(), Rat(3));
    Rect region = rec(GammaSpec{}, {Int(1), Int(1), Int(4)});
    ChartReport serial = verify_chart(c, exhaustive_mode(), region, Int(4000000), 1);
    ChartReport parallel = verify_chart(c, exhaustive_mode(), region, Int(4000000), 0);
    CHECK(serial.to_text() == parallel.to_text());
    ChartReport s1 = verify_chart(c, sampled_mode(500, 42), c.dom, Int(4000000), 1);
    ChartReport s2 = verify_chart(c, sampled_mode(500, 42), c.dom, Int(4000000), 0);
    CHECK(s1.to_text() == s2.to_text());
    CHECK(s1.all_pass());
}
