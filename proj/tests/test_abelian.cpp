// Tests for Smith normal form and abelian quotients.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilrect/abelian.hpp"

using namespace nilrect;

namespace {

IMat mat_mul(const IMat& A, const IMat& B) {
    size_t R = A.size(), K = B.size(), C = K ? B[0].size() : 0;
    IMat M(R, std::vector<Int>(C, Int(0)));
    for (size_t i = 0; i < R; ++i)
        for (size_t k = 0; k < K; ++k)
            for (size_t j = 0; j < C; ++j) M[i][j] += A[i][k] * B[k][j];
    return M;
}

bool is_diagonal(const IMat& D) {
    for (size_t i = 0; i < D.size(); ++i)
        for (size_t j = 0; j < D[i].size(); ++j)
            if (i != j && D[i][j] != 0) return false;
    return true;
}

bool is_identity_mat(const IMat& M) {
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < M[i].size(); ++j)
            if (M[i][j] != (i == j ? 1 : 0)) return false;
    return true;
}

} // namespace

TEST_CASE("smith normal form on random matrices") {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        size_t R = 1 + rng.below(4), C = 1 + rng.below(4);
        IMat A(R, std::vector<Int>(C));
        for (auto& row : A)
            for (auto& x : row) x = Int(rng.range(-9, 9));
        SmithResult s = smith_normal_form(A);
        CHECK(is_diagonal(s.D));
        CHECK(mat_mul(mat_mul(s.U, A), s.V) == s.D);
        CHECK(is_identity_mat(mat_mul(s.U, s.Uinv)));
        for (size_t i = 0; i < std::min(R, C); ++i) CHECK(s.D[i][i] >= 0);
    }
}

TEST_CASE("quotient of Z^2 by <(1,0)> is Z") {
    AbelianQuotient q = abelian_quotient(2, {}, {{Int(1), Int(0)}});
    CHECK(q.ell == 1);
    CHECK(q.gamma.empty());
    CHECK(q.in_subgroup({Int(3), Int(0)}));
    CHECK(!q.in_subgroup({Int(0), Int(1)}));
    auto c = q.to_quotient({Int(7), Int(5)});
    REQUIRE(c.size() == 1);
    CHECK((c[0] == 5 || c[0] == -5));
    CHECK(q.to_quotient(q.lift(c)) == c);
}

TEST_CASE("finite quotients") {
    AbelianQuotient q1 = abelian_quotient(1, {}, {{Int(2)}});
    CHECK(q1.ell == 0);
    CHECK(q1.gamma == std::vector<Int>{Int(2)});

    AbelianQuotient q2 = abelian_quotient(2, {}, {{Int(2), Int(0)}, {Int(0), Int(2)}});
    CHECK(q2.ell == 0);
    Int prod = 1;
    for (const Int& m : q2.gamma) prod *= m;
    CHECK(prod == 4);

    // Ambient torsion: (Z x C6) / <(0,2)> = Z x C2.
    AbelianQuotient q3 = abelian_quotient(1, {Int(6)}, {{Int(0), Int(2)}});
    CHECK(q3.ell == 1);
    CHECK(q3.gamma == std::vector<Int>{Int(2)});
    CHECK(q3.in_subgroup({Int(0), Int(4)}));
    CHECK(!q3.in_subgroup({Int(0), Int(3)}));
}

TEST_CASE("to_quotient is a homomorphism and lift a section") {
    Rng rng(37);
    AbelianQuotient q = abelian_quotient(2, {Int(4)}, {{Int(3), Int(1), Int(2)}});
    for (int t = 0; t < 300; ++t) {
        std::vector<Int> a{Int(rng.range(-8, 8)), Int(rng.range(-8, 8)), Int(rng.range(0, 3))};
        std::vector<Int> b{Int(rng.range(-8, 8)), Int(rng.range(-8, 8)), Int(rng.range(0, 3))};
        std::vector<Int> ab{a[0] + b[0], a[1] + b[1], (a[2] + b[2]) % 4};
        auto qa = q.to_quotient(a), qb = q.to_quotient(b), qab = q.to_quotient(ab);
        // Compose in the quotient group.
        std::vector<Int> sum;
        for (int i = 0; i < q.ell; ++i) sum.push_back(qa[static_cast<size_t>(i)] + qb[static_cast<size_t>(i)]);
        for (size_t j = 0; j < q.gamma.size(); ++j) {
            Int s = (qa[static_cast<size_t>(q.ell) + j] + qb[static_cast<size_t>(q.ell) + j]) % q.gamma[j];
            sum.push_back(s);
        }
        CHECK(qab == sum);
        CHECK(q.to_quotient(q.lift(qa)) == qa);
        // Kernel check: a - lift(to_quotient(a)) is in the subgroup.
        auto l = q.lift(qa);
        std::vector<Int> diff{a[0] - l[0], a[1] - l[1], ((a[2] - l[2]) % 4 + 4) % 4};
        CHECK(q.in_subgroup(diff));
    }
}
