// abelian.cpp -- Smith normal form and abelian quotients, exact over Int.

#include "nilrect/abelian.hpp"

#include <stdexcept>

namespace nilrect {

namespace {

Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

struct SnfWork {
    IMat A, U, Uinv, V;
    size_t R, C;

    void swap_rows(size_t i, size_t j) {
        std::swap(A[i], A[j]);
        std::swap(U[i], U[j]);
        for (size_t r = 0; r < R; ++r) std::swap(Uinv[r][i], Uinv[r][j]);
    }
    void add_row(size_t i, size_t j, const Int& k) { // row i += k * row j
        for (size_t c = 0; c < C; ++c) A[i][c] += k * A[j][c];
        for (size_t c = 0; c < R; ++c) U[i][c] += k * U[j][c];
        for (size_t r = 0; r < R; ++r) Uinv[r][j] -= k * Uinv[r][i];
    }
    void negate_row(size_t i) {
        for (size_t c = 0; c < C; ++c) A[i][c] = -A[i][c];
        for (size_t c = 0; c < R; ++c) U[i][c] = -U[i][c];
        for (size_t r = 0; r < R; ++r) Uinv[r][i] = -Uinv[r][i];
    }
    void swap_cols(size_t i, size_t j) {
        for (size_t r = 0; r < R; ++r) std::swap(A[r][i], A[r][j]);
        for (size_t r = 0; r < C; ++r) std::swap(V[r][i], V[r][j]);
    }
    void add_col(size_t i, size_t j, const Int& k) { // col i += k * col j
        for (size_t r = 0; r < R; ++r) A[r][i] += k * A[r][j];
        for (size_t r = 0; r < C; ++r) V[r][i] += k * V[r][j];
    }
};

} // namespace

SmithResult smith_normal_form(IMat A) {
    size_t R = A.size();
    size_t C = R ? A[0].size() : 0;
    for (const auto& row : A)
        if (row.size() != C) throw std::invalid_argument("smith_normal_form: ragged matrix");

    SnfWork w;
    w.A = std::move(A);
    w.R = R;
    w.C = C;
    w.U.assign(R, std::vector<Int>(R, Int(0)));
    w.Uinv.assign(R, std::vector<Int>(R, Int(0)));
    for (size_t i = 0; i < R; ++i) w.U[i][i] = w.Uinv[i][i] = 1;
    w.V.assign(C, std::vector<Int>(C, Int(0)));
    for (size_t i = 0; i < C; ++i) w.V[i][i] = 1;

    size_t n = std::min(R, C);
    for (size_t t = 0; t < n; ++t) {
        while (true) {
            // Find the submatrix entry of minimal nonzero magnitude.
            bool found = false;
            size_t pi = t, pj = t;
            Int best = 0;
            for (size_t i = t; i < R; ++i)
                for (size_t j = t; j < C; ++j) {
                    if (w.A[i][j] == 0) continue;
                    Int m = abs_int(w.A[i][j]);
                    if (!found || m < best) { found = true; best = m; pi = i; pj = j; }
                }
            if (!found) { t = n; break; } // submatrix is zero; done
            if (pi != t) w.swap_rows(t, pi);
            if (pj != t) w.swap_cols(t, pj);

            bool clean = true;
            for (size_t i = t + 1; i < R; ++i) {
                if (w.A[i][t] == 0) continue;
                Int q = w.A[i][t] / w.A[t][t]; // truncated division
                w.add_row(i, t, -q);
                if (w.A[i][t] != 0) clean = false;
            }
            for (size_t j = t + 1; j < C; ++j) {
                if (w.A[t][j] == 0) continue;
                Int q = w.A[t][j] / w.A[t][t];
                w.add_col(j, t, -q);
                if (w.A[t][j] != 0) clean = false;
            }
            if (clean) break; // Euclid converged for this pivot
        }
        if (t >= n) break;
        if (w.A[t][t] < 0) w.negate_row(t);
    }

    return SmithResult{std::move(w.A), std::move(w.U), std::move(w.Uinv), std::move(w.V)};
}

AbelianQuotient abelian_quotient(int n_free, std::vector<Int> torsion, const IMat& subgens) {
    size_t N = static_cast<size_t>(n_free) + torsion.size();
    IMat rel(N);
    for (auto& row : rel) row.clear();
    // Columns: subgroup generators, then the ambient torsion relations.
    size_t C = subgens.size() + torsion.size();
    for (size_t r = 0; r < N; ++r) rel[r].assign(C, Int(0));
    for (size_t c = 0; c < subgens.size(); ++c) {
        if (subgens[c].size() != N)
            throw std::invalid_argument("abelian_quotient: generator length mismatch");
        for (size_t r = 0; r < N; ++r) rel[r][c] = subgens[c][r];
    }
    for (size_t j = 0; j < torsion.size(); ++j)
        rel[static_cast<size_t>(n_free) + j][subgens.size() + j] = torsion[j];

    SmithResult snf = smith_normal_form(std::move(rel));

    AbelianQuotient q;
    q.n_free = n_free;
    q.torsion = std::move(torsion);
    q.U = std::move(snf.U);
    q.Uinv = std::move(snf.Uinv);
    q.modulus.assign(N, Int(0));
    for (size_t i = 0; i < N && i < C; ++i) q.modulus[i] = snf.D[i][i];
    for (size_t i = 0; i < N; ++i) {
        if (q.modulus[i] == 0) q.free_pos.push_back(static_cast<int>(i));
        else if (q.modulus[i] > 1) q.cyclic_pos.push_back(static_cast<int>(i));
    }
    q.ell = static_cast<int>(q.free_pos.size());
    for (int p : q.cyclic_pos) q.gamma.push_back(q.modulus[static_cast<size_t>(p)]);
    return q;
}

namespace {

Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

std::vector<Int> mat_vec(const IMat& M, const std::vector<Int>& v) {
    std::vector<Int> out(M.size(), Int(0));
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += M[i][j] * v[j];
    return out;
}

} // namespace

std::vector<Int> AbelianQuotient::to_quotient(const std::vector<Int>& v) const {
    if (v.size() != U.size())
        throw std::invalid_argument("to_quotient: coordinate count mismatch");
    std::vector<Int> w = mat_vec(U, v);
    std::vector<Int> out;
    for (int p : free_pos) out.push_back(w[static_cast<size_t>(p)]);
    for (int p : cyclic_pos) out.push_back(mod_pos(w[static_cast<size_t>(p)], modulus[static_cast<size_t>(p)]));
    return out;
}

std::vector<Int> AbelianQuotient::lift(const std::vector<Int>& q) const {
    if (q.size() != free_pos.size() + cyclic_pos.size())
        throw std::invalid_argument("lift: coordinate count mismatch");
    std::vector<Int> w(U.size(), Int(0));
    for (size_t i = 0; i < free_pos.size(); ++i) w[static_cast<size_t>(free_pos[i])] = q[i];
    for (size_t i = 0; i < cyclic_pos.size(); ++i) {
        size_t p = static_cast<size_t>(cyclic_pos[i]);
        w[p] = mod_pos(q[free_pos.size() + i], modulus[p]);
    }
    std::vector<Int> v = mat_vec(Uinv, w);
    for (size_t j = 0; j < torsion.size(); ++j) {
        size_t p = static_cast<size_t>(n_free) + j;
        v[p] = mod_pos(v[p], torsion[j]);
    }
    return v;
}

bool AbelianQuotient::in_subgroup(const std::vector<Int>& v) const {
    for (const Int& c : to_quotient(v)) if (c != 0) return false;
    return true;
}

} // namespace nilrect
