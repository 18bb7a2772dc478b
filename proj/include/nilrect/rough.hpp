// rough.hpp
// Rough rectangles, rectangular relations, facial boundaries, and their
// brute-force verifiers on windows.  Every verifier works purely from the
// definitions by enumeration; construction-emitted witnesses are re-checked
// here, never trusted.

#pragma once

#include "nilrect/chart.hpp"
#include "nilrect/eqrel.hpp"
#include "nilrect/window.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nilrect {

// The set phi(R) . x as window points (duplicates removed, sorted).
std::vector<long long> phi_orbit(const Window& w, const Chart& c, const Rect& R, long long x,
                                 const Int& budget = Int(50000000));

struct RoughCheck {
    bool ok = false;
    std::string witness; // first violated condition / offending point
};

// Definition check: R is roughly A at x with tolerance eps, i.e.
// 2.Zee fits in eps.A and phi((1-eps).A).x is contained in R is contained in
// phi((1+eps).A).x.  R must be sorted.
RoughCheck verify_rough(const Window& w, const std::vector<long long>& R, const Chart& c,
                        const Rect& A, const Rat& eps, long long x,
                        const Int& budget = Int(50000000));

// The (i, A)-boundary of E: points x (in X^H, given by the optional mask)
// such that the E-saturations of the two opposite i-faces of A translated
// to x are disjoint.  A must be centered and inside dom.
std::vector<long long> boundary(const Window& w, const EqRel& E, const Chart& c, const Rect& A,
                                int axis, const std::vector<char>* xh = nullptr, int jobs = 1);

// Per-point box invariance: mask[x] = 1 iff phi(R).x is contained in [x]_E.
// R must be centered and inside dom.  Linear charts over torsion-free
// coordinates use a separable per-axis sweep along the unit-generator
// cycles (O(points * ell) instead of O(points * |R|)); everything else
// falls back to direct enumeration of phi(R).  The two routes agree and
// the fallback is the reference in tests.
std::vector<char> box_invariant_mask(const Window& w, const EqRel& E, const Chart& c,
                                     const Rect& R, const Int& budget = Int(50000000),
                                     int jobs = 1);

// Certificate for a rectangular relation: per class a re-verified witness.
struct RectCert {
    bool pass = false;
    std::string failure; // first failing class, empty when pass
    std::unordered_map<long long, RoughWitness> by_class;
    std::string to_text() const;
};

// Checks that E is rectangular with respect to (c, A, eps): singleton
// classes off X^H, and every class meeting X^H admits (B, delta) with
// A fits in B, dom_mult.B inside dom, 2 delta.B fits in eps.A, and the
// rough sandwich passing.  Tries E's own emitted witnesses first, then a
// bounding-box search from the class's least point.
RectCert verify_rectangular(const Window& w, const EqRel& E, const Chart& c, const Rect& A,
                            const Rat& eps, const Rat& dom_mult,
                            const std::vector<char>* xh = nullptr,
                            const Int& budget = Int(50000000));

// Re-bases a certified class near y: finds v with phi(v).y = the witness
// base, and returns the witness translated to y (tolerance doubled).
// target < 0 selects the least class met by phi(M.A).y.
struct FindBaseResult {
    long long cls = -1;
    GVec v;
    Rect B_translated; // B + v
    Rat delta;         // the doubled tolerance
};
FindBaseResult find_base(const Window& w, const EqRel& E, const RectCert& cert, const Chart& c,
                         const Rect& A, const Rat& eps, long long y, const Rat& M,
                         long long target = -1, const Int& budget = Int(50000000));

struct LemmaReport {
    bool pass = false;
    long long checked = 0;
    std::vector<std::string> failures;
    std::string constants; // paper-vs-configured constant note
};

// Boundary points inside a certified class lie in the two face slabs
// -b_i e_i + B^i + 2q.A and +b_i e_i + B^i + 2q.A around the witness base.
// Hypothesis range 6 eps < q < 1 - eps (refused otherwise).
LemmaReport verify_faces(const Window& w, const EqRel& E, const RectCert& cert, const Chart& c,
                         const Rect& A, const Rat& eps, const Rat& q,
                         const std::vector<char>* xh = nullptr,
                         const Int& budget = Int(50000000));

// Every x with phi(3.Zee).x not inside [x]_E lies within phi(30l.(q.A)) of
// some i-boundary.  Hypothesis range 12 eps < q < 1/(24 l).
LemmaReport verify_strong_boundary(const Window& w, const EqRel& E, const Chart& c,
                                   const Rect& A, const Rat& eps, const Rat& q,
                                   const std::vector<char>* xh = nullptr,
                                   const Int& budget = Int(50000000));

// Greedy maximal packing of i-boundary points near x with pairwise disjoint
// phi(neigh_mult.A^i + 5q.A) neighborhoods; the packing size is reported
// against the reference bound 2^(22 l^2).  Hypothesis range 6 eps < q < 1/2.
// search_mult and neigh_mult default to the reference values 2^(17 l) and
// 2^(19 l) when unset; relaxed runs pass smaller values.
struct ClusterReport {
    long long observed = 0;
    Int bound;                     // 2^(22 l^2)
    std::vector<long long> reps;   // the packed boundary points
    std::string constants;
};
ClusterReport count_boundary_clusters(const Window& w, const EqRel& E, const Chart& c,
                                      const Rect& A, const Rat& eps, const Rat& q, int axis,
                                      long long x,
                                      std::optional<Rat> search_mult = std::nullopt,
                                      std::optional<Rat> neigh_mult = std::nullopt,
                                      const Int& budget = Int(50000000));

} // namespace nilrect
