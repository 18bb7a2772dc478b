// array.hpp
// The two-dimensional diagonalization array on a window: one chart per level
// of an increasing generator chain, columns of relations built left to right
// through the orthogonalizing construction, selectors transporting each new
// diagonal relation down the chain, and the six clause checks -- every one
// of them executed by the independent verifiers, never by the constructor's
// own bookkeeping.  The module also houses the eventual-agreement report for
// the bottom row and the finite coding map into binary words.

#pragma once

#include "nilrect/ortho.hpp"
#include "nilrect/scenario.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nilrect {

// One chain level, fully instantiated: the span chart of the level's
// generators, the base rectangle, the constants, and the assembled
// construction parameters.  b is the per-point budget: one more than the
// rank of the next level up (the top level uses its own rank).
struct ArrayLevel {
    Chart chart;
    std::vector<GroupElement> gens;
    Rect A;
    Rat eps;
    Rat q;
    long long p = 0;
    long long b = 0;
    OrthoParams prm;
    std::optional<Rat> dilation; // row orthogonality dilation override
};

struct ClauseCheck {
    std::string name;
    bool pass = false;
    std::string detail; // witness points on failure, counts on pass
};

struct ColumnReport {
    int column = 0;
    std::vector<ClauseCheck> checks;
    bool all_pass() const;
    std::string to_text() const;
};

// The array.  E[n-1][k-1] holds E_{k,n} (row k, column n, 1 <= k <= n);
// F[n-1][k-1] and Fcert hold column n's auxiliary relations with their
// independently re-verified certificates; sigma[n-1][k-1] is the selector
// table of F_{k} used to transport column n downward (rows 1..n-1).
struct ArrayState {
    std::shared_ptr<const Window> window;
    std::vector<ArrayLevel> levels;
    std::vector<std::vector<EqRel>> E;
    std::vector<std::vector<EqRel>> F;
    std::vector<std::vector<RectCert>> Fcert;
    std::vector<std::vector<std::vector<long long>>> sigma;
    std::vector<ColumnReport> reports;
    std::string certificate; // deterministic text dump

    const EqRel& rel(int row, int col) const { // 1-based, row <= col
        return E[static_cast<size_t>(col - 1)][static_cast<size_t>(row - 1)];
    }
};

// The orbit relation of the given generators on the window (union-find).
EqRel orbit_relation(const Window& w, const std::vector<GroupElement>& gens);

// Instantiates level k (0-based) of a scenario: the span chart with dom wide
// enough for every region the construction and the verifiers touch, and the
// assembled construction parameters.  Shared by the column builder and the
// single-level pipeline commands.
ArrayLevel instantiate_level(const Scenario& s, int k);

// Builds the array column by column.  Per column n: auxiliary F_k for each
// row k <= n via build_orthogonal_relation against row k's existing
// relations, re-certified by verify_rectangular; E_{n,n} = F_n; downward
// x E_{k,n} y iff sigma_k(x) E_{k+1,n} sigma_k(y) with sigma_k the verified
// selector of F_k.  After each column every clause is asserted:
//   (i)   each E_{k,n} refines the G_n-orbit relation;
//   (ii)  E_{k,n} contains the certified rectangular F_k;
//   (iii) row k is pairwise orthogonal at q_k . A_k;
//   (iv)  on the phi_{k+1}(Zee_{k+1})-invariant set, E_{k,n} and E_{k+1,n}
//         induce the same partition;
//   (v)   at most b_k relations in row k move phi_k(8 p_k . A_k) . x out
//         of [x], at every point;
//   (vi)  on the phi_k(3 . Zee_k)-invariant set of E_{k,n}, E_{t,n} (t <= k)
//         induces the same partition;
//   (b)   sigma_k(x) lies in phi_{k+1}(Zee_{k+1}) . x at every point, and
//         the level-(k+1) generators lie in phi_{k+1}(Zee_{k+1}).
// Any failed check throws std::runtime_error naming the column, the row(s),
// and the witness point(s).
ArrayState build_free_array(const Scenario& s, int columns, const Int& budget = Int(50000000),
                            int jobs = 1);

// A sampled pair (x, y = g.x) with g drawn from level `level`'s generators.
struct AgreementPair {
    long long x = 0;
    long long y = 0;
    int level = 1; // 1-based
};

struct AgreementReport {
    bool pass = false;
    long long pairs_checked = 0;
    long long max_row_failures = 0;    // worst row-level disagreement count
    long long max_bottom_failures = 0; // worst bottom-row disagreement count
    std::vector<std::string> violations;
    std::string to_text() const;
};

// For each pair: counts the columns n >= k with x and y E_{k,n}-inequivalent
// and asserts the count is at most the level's rank (the orthogonal-sequence
// mechanism); counts bottom-row disagreements and asserts they stay within
// the row count plus the columns where the clause (vi) hypothesis fails at
// x or y (the propagation bound).  Violations are reported, never thrown.
AgreementReport verify_eventual_agreement(const ArrayState& a,
                                          const std::vector<AgreementPair>& pairs);

// The per-point binary codes: block n (levels 0..columns) holds the
// fixed-width rank of (S_n(x), g_n(x)) where S_n is the verified selector of
// the bottom-row relation E_{1,n} (level 0: equality, so block 0 is the
// point index itself) and g_n(x) is the unique element of K_n K_{n-1}
// carrying S_{n-1}(x) to S_n(x).
struct E0Code {
    std::vector<long long> widths;        // bits per block
    std::vector<long long> offsets;       // prefix sums (size widths.size()+1)
    std::vector<std::vector<char>> bits;  // per point, concatenated blocks
    std::vector<std::vector<long long>> selector; // per level, S_n table
};

// Encodes every window point.  `localization` optionally supplies K_n per
// column (element lists); when empty, K_n is computed from the in-class
// displacements of E_{1,n} and symmetrized/accumulated so the K_n increase.
// The K-bound [x] inside K_n . x is re-verified by build_selector; a
// non-unique g_n throws ("freeness violated at scale n").
E0Code e0_encode(const ArrayState& a,
                 const std::vector<std::vector<GroupElement>>& localization = {});

// Pairwise injectivity via hashing; on failure the colliding points are
// written to *x, *y.
bool e0_injective(const E0Code& code, long long* x = nullptr, long long* y = nullptr);

// The least block index m such that the codes of x and y agree on every
// block >= m (0 when the codes are identical, widths.size() when the last
// blocks differ).
long long e0_agreement_level(const E0Code& code, long long x, long long y);

std::string e0_to_text(const E0Code& code);

} // namespace nilrect
