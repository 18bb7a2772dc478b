// ortho.hpp
// The orthogonalizing construction: given a finite list of certified
// sub-rectangular relations, build a rectangular relation whose dilated
// boundaries avoid theirs.  The module also houses the exact-arithmetic
// validation of the construction's hypothesis inequalities, the pairwise
// orthogonality check, and the failure-count property of orthogonal
// sequences.  The construction never certifies itself: callers re-run
// verify_rectangular and is_orthogonal on its output.

#pragma once

#include "nilrect/markers.hpp"
#include "nilrect/rough.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nilrect {

// Construction parameters.  The defaults are the reference constants; desk
// runs shrink p and the guard multipliers (relaxed mode) and then verify the
// conclusions empirically instead of leaning on the counting argument.
struct OrthoParams {
    Rect A;                      // centered
    Rat eps;                     // rough tolerance
    Rat q;                       // boundary scale for orthogonality
    long long b = 1;             // per-point bound on non-absorbed relations
    long long p = 0;             // 0 = reference default 2^(14 l)
    Rat marker_mult{3, 4};       // K = sym. closure of phi((marker_mult p).A)
    Rat partition_mult{13};      // clause (ii) scan range, times p.A
    Rat scan_mult{7};            // clause (iii) scan range, times p.A
    Rat block_mult{9};           // outer block reach, times d
    Rat guard2{3};               // clause (ii) spacing, times a_i
    Rat guard3{0};               // clause (iii) spacing, times q a_i; 0 = 64 l
    std::optional<Int> neighbor_bound; // N1 override for the budget check
    std::optional<Int> cluster_bound;  // N2 override for the budget check
    bool strict = false;         // reference mode: constants forced, symbolic
};

// 2^(14 l), the reference marker scale.
Int reference_p(int ell);

// The exact upper end of the q-window: 1 / (4 . 306 . l . b . 2^(22 l^2)).
Rat strict_q_bound(int ell, long long b);

struct ParamCheck {
    std::string name;
    bool pass = false;
    bool required = true;   // informational checks don't gate all_pass
    std::string detail;     // exact slack / violated bound
};
struct ParamReport {
    std::vector<ParamCheck> checks;
    bool all_pass() const;
    std::string to_text() const;
};

// Evaluates every hypothesis of the construction with exact rationals:
// the dom containment, the Zee-vs-eps.A fit, both ends of the q-window,
// and the forbidden-interval budget.  In strict mode the reference
// constants are used throughout and every check gates all_pass; in
// relaxed mode the reference-only inequalities are reported as
// informational and the configured analogues gate.
ParamReport check_parameters(const Chart& c, const OrthoParams& prm);

// An input relation together with its independent certificate.
struct CertifiedRel {
    EqRel E;
    RectCert cert;
};

struct OrthoResult {
    EqRel F;                                 // with emitted witnesses
    MarkerSet Y;
    std::vector<std::vector<long long>> parts; // marker partition, in order
    std::vector<std::vector<Int>> d;           // radius vector per marker,
                                               // aligned with Y.members
    std::string certificate;                   // deterministic text dump
};

// Executes the construction: greedy marker set with K = the symmetric
// closure of phi((3p/4).A), marker partition by the symmetric closure of
// phi(13p.A), least-admissible d_i(y) in [p a_i, 2p a_i] avoiding the
// clause (ii) intervals (guard2 a_i around faces of assigned neighbors in
// phi(13p.A).y) and the clause (iii) intervals (guard3 q a_i around
// boundary points of the existing relations in phi(7p.A).y), rough
// rectangles R_y = phi(D_y).y with their surrounding blocks, and the
// finest relation respecting all block memberships for y in S(x).
// Preconditions (checked): at most b existing relations fail
// phi(8p.A).x inside [x] at any x in X^H.  Emits per-class witnesses with
// delta = eps/(18p); the caller re-certifies.
// Errors: no admissible d_i(y) -> std::runtime_error naming (y, i) and
// the forbidden intervals; per-point bound violation -> invalid_argument
// naming x.
OrthoResult build_orthogonal_relation(const Window& w, const Chart& c, const OrthoParams& prm,
                                      const std::vector<CertifiedRel>& existing,
                                      const std::vector<char>* xh = nullptr,
                                      const Int& budget = Int(50000000), int jobs = 1);

struct OrthoCheck {
    bool ok = false;
    std::string witness; // axis and common point when not orthogonal
};

// Orthogonality of E and F at A: for each axis the phi(30l.A)-dilations of
// the two i-boundaries must be disjoint.  `dilation` overrides 30l.
// Pre (checked): the dilation rectangle fits in dom.
OrthoCheck is_orthogonal(const Window& w, const EqRel& E, const EqRel& F, const Chart& c,
                         const Rect& A, std::optional<Rat> dilation = std::nullopt,
                         const std::vector<char>* xh = nullptr,
                         const Int& budget = Int(50000000), int jobs = 1);

struct OrthoSeqReport {
    bool pass = false;
    long long pairs_checked = 0;
    long long max_failures = 0;
    std::vector<std::string> violations;
    std::string constants;
};

// Failure-count property of an orthogonal sequence: for each sampled pair
// (x, y) with y in phi(Zee).x, the number of relations separating x from y
// is at most l.  Hypotheses (refused otherwise): trivial stabilizer family,
// eps < 1/4, 12 eps < q < 1/(24 l).  Pairwise orthogonality and the
// sub-rectangular certificates are the caller's precondition.
OrthoSeqReport verify_orthoseq(const Window& w, const std::vector<EqRel>& relations,
                               const Chart& c, const Rect& A, const Rat& eps, const Rat& q,
                               const std::vector<std::pair<long long, long long>>& pairs);

} // namespace nilrect
