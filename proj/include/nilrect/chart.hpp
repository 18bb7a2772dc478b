// chart.hpp
// Charts: a finite abelian-looking coordinate patch on a nilpotent group.
// A chart carries an "almost-homomorphism" phi from a centered rectangle
// into the group together with a small centered error rectangle Zee and a
// finite family calH of pairwise conjugate subgroups (empty list = the
// trivial-subgroup marker).  verify_chart checks the five defining axioms
// on a region; the two builders realize the recursive constructions (the
// free construction with trivial calH, and the general coset construction).

#pragma once

#include "nilrect/abelian.hpp"
#include "nilrect/group.hpp"
#include "nilrect/rect.hpp"
#include "nilrect/subgroup.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nilrect {

// A subgroup together with a membership decision procedure.  Builders
// install exact closed-form oracles (lattice membership for central or
// abelian-ambient subgroups); the generic fallback is the bounded word
// search, which can answer "inconclusive".
struct CosetOracle {
    Subgroup H;
    std::function<Tri(const GroupElement&)> member;
};

struct Chart {
    int ell = 0;
    GammaSpec gamma;
    Rect zee;  // centered, all radii > 0
    Rect dom;  // centered, contains 3 * zee
    GroupSpec group;
    std::function<GroupElement(const GVec&)> phi;      // defined on dom
    std::function<std::optional<GVec>(const GroupElement&)> phi_inv; // may be empty
    std::vector<CosetOracle> calH;                     // empty = trivial subgroup
    bool linear = false; // phi is an exact homomorphism on all of Z^ell x Gamma

    bool trivial_stabilizers() const { return calH.empty(); }
};

// Thrown when a construction or sweep would need to enumerate more points
// than the caller's budget allows; `required` is the minimal feasible budget.
struct BudgetError : std::runtime_error {
    Int required;
    explicit BudgetError(const Int& req)
        : std::runtime_error("enumeration budget exceeded; minimal feasible budget = " + req.str()),
          required(req) {}
};

// Verification -----------------------------------------------------------

struct VerifyMode {
    bool exhaustive = true;
    long long trials = 0;   // sampled mode: number of (r, s) pairs
    std::uint64_t seed = 0;
};

inline VerifyMode exhaustive_mode() { return VerifyMode{true, 0, 0}; }
inline VerifyMode sampled_mode(long long trials, std::uint64_t seed) {
    return VerifyMode{false, trials, seed};
}

struct AxiomReport {
    std::string name;
    long long checked = 0;       // pairs where the axiom's hypothesis held
    long long passed = 0;
    long long skipped = 0;       // hypothesis did not hold
    long long inconclusive = 0;  // a membership oracle could not decide
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

struct ChartReport {
    std::vector<AxiomReport> axioms; // injectivity, product, right-diff, left-diff, inverse
    bool all_pass() const {
        for (const auto& a : axioms) if (!a.pass()) return false;
        return true;
    }
    std::string to_text() const;
};

// Checks the five chart axioms for (r, s) ranging over region x region
// (exhaustive) or `trials` sampled pairs.  region must be a sub-rectangle
// of dom.  `budget` bounds every enumeration; `jobs` parallelizes the grid
// with a deterministic merge (0 = all threads, 1 = serial reference).
ChartReport verify_chart(const Chart& c, const VerifyMode& mode, const Rect& region,
                         const Int& budget = Int(4000000), int jobs = 1);

// Text certificate for reproducibility: shape, region checked, pass counts.
std::string chart_certificate(const Chart& c, const Rect& region, const ChartReport& rep);

// Builders ---------------------------------------------------------------

// The coordinate-isomorphism chart of an abelian catalog group.
Chart build_abelian_chart(const GroupSpec& G, const std::vector<Int>& zee_radii,
                          const Rat& lambda);

// The chart of a subgroup of an abelian catalog group spanned by independent
// generators: phi(v) = sum v_i gens_i, inverted exactly through the Smith
// normal form of the generator matrix.  Generators must be torsion-free and
// Z-independent (refused otherwise); dom is given by its radii directly.
Chart build_span_chart(const GroupSpec& G, const std::vector<GroupElement>& gens,
                       const std::vector<Int>& zee_radii, const std::vector<Int>& dom_radii);

// The recursive construction with trivial calH: quotient chart by the
// center, a lexicographically minimal section, an error set K absorbed into
// the new central coordinates.  Guarantees F inside phi(Zee), lambda * Zee
// inside dom, ell = Hirsch length of G.  The chart axioms are certified on
// the working region = dom (the whole domain is enumerated; a dom larger
// than `budget` raises BudgetError).
Chart build_chart_free(const GroupSpec& G, const std::vector<GroupElement>& F,
                       const Rat& lambda, const Int& budget = Int(4000000));

// The general construction for a nonempty family S of pairwise conjugate
// subgroups.  Supported S members: subgroups of the center, or the trivial
// subgroup, or any subgroup when G is abelian.  Guarantees ell <= Hirsch
// length, lambda * Zee inside dom, F inside phi(Zee) H for every H in calH,
// and phi(u) S phi(u)^{-1} inside calH for u in eta * Zee.
Chart build_chart_general(const GroupSpec& G, const std::vector<Subgroup>& S,
                          const std::vector<GroupElement>& F, const Rat& lambda,
                          const Rat& eta, const Int& budget = Int(4000000));

// Helpers shared with the window module ----------------------------------

// Splits/joins chart coordinates for product charts are internal; these
// helpers evaluate phi on whole rectangles.
std::vector<GroupElement> phi_image(const Chart& c, const Rect& region, const Int& budget);

// GVec arithmetic in the chart's coordinate shape.
GVec chart_add(const Chart& c, const GVec& a, const GVec& b);
GVec chart_sub(const Chart& c, const GVec& a, const GVec& b);
GVec chart_neg(const Chart& c, const GVec& a);

} // namespace nilrect
