// Tests for the group catalog: laws, the unitriangular-matrix oracle for the
// Heisenberg product, center decompositions, subgroups and the conjugacy demo.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilrect/group.hpp"
#include "nilrect/subgroup.hpp"

#include <array>

using namespace nilrect;

namespace {

// Independent oracle: M(a,b,c) = [[1,b,-c],[0,1,a],[0,0,1]] turns the
// Heisenberg product into matrix multiplication.
using Mat = std::array<std::array<Int, 3>, 3>;

Mat to_matrix(const Int& a, const Int& b, const Int& c) {
    return {{{Int(1), b, -c}, {Int(0), Int(1), a}, {Int(0), Int(0), Int(1)}}};
}

Mat mat_mul(const Mat& x, const Mat& y) {
    Mat r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Int s = 0;
            for (int k = 0; k < 3; ++k) s += x[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                                              y[static_cast<size_t>(k)][static_cast<size_t>(j)];
            r[static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
        }
    return r;
}

GroupElement random_element(const GroupSpec& G, Rng& rng) {
    std::vector<Int> c;
    for (int i = 0; i < G.num_coords(); ++i) c.push_back(Int(rng.range(-9, 9)));
    return make_element(G, std::move(c));
}

std::vector<GroupSpec> catalog() {
    return {
        free_abelian(2),
        cyclic(Int(6)),
        heisenberg(),
        product({cyclic(Int(6)), heisenberg()}),
        product({heisenberg(), free_abelian(1)}),
        truncated_sum(heisenberg(), 3),
        product({truncated_sum(heisenberg(), 2), cyclic(Int(4)), free_abelian(2)}),
    };
}

} // namespace

TEST_CASE("heisenberg product law and commutator") {
    GroupSpec H = heisenberg();
    GroupElement a = make_element(H, {Int(1), Int(0), Int(0)});
    GroupElement b = make_element(H, {Int(0), Int(1), Int(0)});
    CHECK(multiply(a, b).coords == std::vector<Int>{Int(1), Int(1), Int(0)});
    CHECK(multiply(b, a).coords == std::vector<Int>{Int(1), Int(1), Int(-1)});
    CHECK(commutator(a, b).coords == std::vector<Int>{Int(0), Int(0), Int(1)});
    CHECK(is_identity(multiply(a, invert(a))));
}

TEST_CASE("heisenberg product matches the matrix oracle") {
    Rng rng(7);
    GroupSpec H = heisenberg();
    for (int t = 0; t < 2000; ++t) {
        GroupElement g = random_element(H, rng), h = random_element(H, rng);
        GroupElement p = multiply(g, h);
        Mat lhs = mat_mul(to_matrix(g.coords[0], g.coords[1], g.coords[2]),
                          to_matrix(h.coords[0], h.coords[1], h.coords[2]));
        Mat rhs = to_matrix(p.coords[0], p.coords[1], p.coords[2]);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("group laws across the catalog") {
    Rng rng(11);
    for (const auto& G : catalog()) {
        GroupElement e = identity(G);
        for (int t = 0; t < 400; ++t) {
            GroupElement g = random_element(G, rng), h = random_element(G, rng),
                         k = random_element(G, rng);
            CHECK(multiply(multiply(g, h), k) == multiply(g, multiply(h, k)));
            CHECK(multiply(g, e) == g);
            CHECK(multiply(e, g) == g);
            CHECK(is_identity(multiply(g, invert(g))));
            CHECK(is_identity(multiply(invert(g), g)));
        }
        CHECK(power(random_element(G, rng), Int(0)) == e);
    }
}

TEST_CASE("powers agree with iterated products") {
    Rng rng(13);
    GroupSpec G = product({heisenberg(), cyclic(Int(5))});
    for (int t = 0; t < 50; ++t) {
        GroupElement g = random_element(G, rng);
        GroupElement acc = identity(G);
        for (int n = 0; n <= 7; ++n) {
            CHECK(power(g, Int(n)) == acc);
            CHECK(power(g, Int(-n)) == invert(acc));
            acc = multiply(acc, g);
        }
    }
}

TEST_CASE("hirsch length") {
    CHECK(hirsch_length(free_abelian(3)) == 3);
    CHECK(hirsch_length(heisenberg()) == 3);
    CHECK(hirsch_length(product({cyclic(Int(6)), heisenberg()})) == 3);
    CHECK(hirsch_length(truncated_sum(heisenberg(), 4)) == 12);
    // Additivity over products, combinators up to depth 3.
    auto cat = catalog();
    for (const auto& a : cat)
        for (const auto& b : cat) {
            CHECK(hirsch_length(product({a, b})) == hirsch_length(a) + hirsch_length(b));
            CHECK(hirsch_length(product({a, product({b, heisenberg()})})) ==
                  hirsch_length(a) + hirsch_length(b) + 3);
        }
}

TEST_CASE("center decomposition: heisenberg") {
    auto d = center_decomposition(heisenberg());
    CHECK(d.ell1 == 1);
    CHECK(d.gamma1.empty());
    CHECK(d.quotient == free_abelian(2));

    // Centrality of the iso image, brute force against random elements.
    Rng rng(17);
    GroupElement z = d.embed_center({Int(5)});
    for (int t = 0; t < 1000; ++t) {
        GroupElement g = random_element(heisenberg(), rng);
        CHECK(multiply(z, g) == multiply(g, z));
    }
    // No element with (a,b) != (0,0) is central: it fails against a generator.
    GroupElement a = make_element(heisenberg(), {Int(1), Int(0), Int(0)});
    GroupElement b = make_element(heisenberg(), {Int(0), Int(1), Int(0)});
    for (int ca = -3; ca <= 3; ++ca)
        for (int cb = -3; cb <= 3; ++cb) {
            if (ca == 0 && cb == 0) continue;
            GroupElement g = make_element(heisenberg(), {Int(ca), Int(cb), Int(1)});
            bool commutes = multiply(g, a) == multiply(a, g) && multiply(g, b) == multiply(b, g);
            CHECK(!commutes);
        }
}

TEST_CASE("center decomposition: homomorphism and section laws") {
    Rng rng(19);
    for (const auto& G : catalog()) {
        auto d = center_decomposition(G);
        for (int t = 0; t < 300; ++t) {
            GroupElement g = random_element(G, rng), h = random_element(G, rng);
            // project is a homomorphism.
            CHECK(d.project(multiply(g, h)) == multiply(d.project(g), d.project(h)));
            // iso image is central.
            std::vector<Int> v;
            for (int i = 0; i < d.ell1; ++i) v.push_back(Int(rng.range(-5, 5)));
            for (size_t i = 0; i < d.gamma1.size(); ++i) v.push_back(Int(rng.range(0, 3)));
            GroupElement z = d.embed_center(v);
            CHECK(multiply(z, g) == multiply(g, z));
            CHECK(d.center_coords(z).size() == static_cast<size_t>(d.ell1) + d.gamma1.size());
            // iso is a homomorphism into G.
            std::vector<Int> w;
            for (size_t i = 0; i < v.size(); ++i) w.push_back(Int(rng.range(-5, 5)));
            GroupElement z2 = d.embed_center(w);
            std::vector<Int> vw;
            for (size_t i = 0; i < v.size(); ++i) {
                Int s = v[i] + w[i];
                if (i >= static_cast<size_t>(d.ell1)) {
                    const Int& m = d.gamma1[i - static_cast<size_t>(d.ell1)];
                    s %= m;
                    if (s < 0) s += m;
                }
                vw.push_back(s);
            }
            CHECK(multiply(z, z2) == d.embed_center(vw));
        }
        // project o lift = identity on the quotient.
        for (int t = 0; t < 100; ++t) {
            GroupElement q = random_element(d.quotient, rng);
            CHECK(d.project(d.lift(q)) == q);
        }
        CHECK(is_identity(d.lift(identity(d.quotient))));
    }
    CHECK(center_decomposition(free_abelian(2)).quotient.num_coords() == 0);
    auto dh = center_decomposition(product({heisenberg(), free_abelian(1)}));
    CHECK(dh.ell1 == 2);
    CHECK(hirsch_length(dh.quotient) == 2);
}

TEST_CASE("group spec text round-trips") {
    for (const auto& G : catalog()) {
        auto back = group_from_text(group_to_text(G));
        REQUIRE(back.has_value());
        CHECK(group_to_text(*back) == group_to_text(G));
    }
    CHECK(group_from_text("Z^3").has_value());
    CHECK(group_to_text(*group_from_text("C6 x heisenberg")) == "C6 x heisenberg");
    CHECK(group_to_text(*group_from_text("sum(heisenberg, 4)")) == "sum(heisenberg, 4)");
    CHECK(!group_from_text("Q^2").has_value());
    CHECK(!group_from_text("sum(heisenberg, 0)").has_value());
}

TEST_CASE("subgroup membership: definitive answers on a finite group") {
    GroupSpec G = cyclic(Int(6));
    Subgroup H{G, {make_element(G, {Int(2)})}};
    CHECK(subgroup_member(H, make_element(G, {Int(4)}), Int(10)) == Tri::Yes);
    CHECK(subgroup_member(H, make_element(G, {Int(1)}), Int(10)) == Tri::No);
    CHECK(subgroup_member(H, identity(G), Int(10)) == Tri::Yes);
}

TEST_CASE("hx subgroups") {
    std::vector<int> x{0, 1, 1};
    Subgroup H = hx_subgroup(x);
    CHECK(H.generators.size() == 3);
    CHECK(H.generators[1].coords[3] == -1);
    CHECK(H.generators[1].coords[5] == 1);

    // Generators and short products are members (word search route).
    CHECK(subgroup_member(H, H.generators[0], Int(4)) == Tri::Yes);
    CHECK(subgroup_member(H, multiply(H.generators[0], H.generators[2]), Int(4)) == Tri::Yes);

    // b_0 is never a member: the exact oracle refutes it, and the bounded
    // word search never claims it.
    GroupElement b0 = identity(H.ambient);
    b0.coords[1] = 1;
    CHECK(!hx_member_exact(x, b0));
    CHECK(subgroup_member(H, b0, Int(3)) != Tri::Yes);

    // The closed form agrees with the word search on everything it certifies.
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
        GroupElement g = identity(H.ambient);
        for (size_t i = 0; i < x.size(); ++i) {
            Int k(rng.range(-2, 2));
            g.coords[3 * i] = -k;
            g.coords[3 * i + 2] = k * x[i];
        }
        CHECK(hx_member_exact(x, g));
        CHECK(subgroup_member(H, g, Int(8)) == Tri::Yes);
    }

    CHECK(hx_recover_word(H) == x);
}

TEST_CASE("conjugacy demo") {
    // x = y: the canonical conjugator is the identity.
    Subgroup H1 = hx_subgroup({1, 0});
    auto r0 = conjugator_search(H1, H1, Int(6));
    REQUIRE(r0.status == Tri::Yes);
    CHECK(is_identity(*r0.g));

    // N = 1, x = (0), y = (1): g = b_0.
    auto rx = conjugator_search(hx_subgroup({0}), hx_subgroup({1}), Int(6));
    REQUIRE(rx.status == Tri::Yes);
    CHECK(rx.g->coords == std::vector<Int>{Int(0), Int(1), Int(0)});
    // b_0 a_0^{-1} b_0^{-1} = a_0^{-1} c_0.
    GroupSpec A1 = truncated_sum(heisenberg(), 1);
    GroupElement b = make_element(A1, {Int(0), Int(1), Int(0)});
    GroupElement ainv = make_element(A1, {Int(-1), Int(0), Int(0)});
    CHECK(conjugate(ainv, b).coords == std::vector<Int>{Int(-1), Int(0), Int(1)});

    // N = 2, x = (0,1), y = (1,0), support {0}: no conjugator exists.
    auto rn = conjugator_search(hx_subgroup({0, 1}), hx_subgroup({1, 0}), Int(8),
                                std::vector<int>{0});
    CHECK(rn.status == Tri::No);
    CHECK(!rn.g.has_value());

    // Same pair, unrestricted: the canonical conjugator works.
    auto ry = conjugator_search(hx_subgroup({0, 1}), hx_subgroup({1, 0}), Int(8));
    CHECK(ry.status == Tri::Yes);
}
