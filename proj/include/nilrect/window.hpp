// window.hpp
// Finite total-action testbeds: periodic quotients of catalog groups acting
// on themselves by left translation, and coset spaces for non-free tests.
// Points are densely indexed; the action is evaluated in closed form through
// mod-N reduction (a genuine quotient for every catalog law).

#pragma once

#include "nilrect/chart.hpp"
#include "nilrect/group.hpp"
#include "nilrect/subgroup.hpp"

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace nilrect {

struct Window {
    GroupSpec group;
    long long N = 0;              // period
    std::vector<Int> moduli;      // per group coordinate (N for free, order for cyclic)
    long long full_size = 0;      // product of moduli
    bool is_coset = false;
    Subgroup H;                   // the quotiented subgroup (trivial for free windows)

    // Coset structure: every full point maps to its class; classes are
    // represented by their least full index.  For free windows these are
    // the identity maps.
    std::vector<long long> class_of;   // full index -> point index
    std::vector<long long> rep_of;     // point index -> full index
    long long num_points = 0;

    GroupElement point_element(long long x) const; // canonical representative
    long long reduce_rank(const GroupElement& e) const; // full index of reduced coords
    long long act(const GroupElement& g, long long x) const;
};

// Left-translation window on G mod N (all free coordinates reduced mod N).
Window build_window(const GroupSpec& G, long long N);

// Coset window: points are the left cosets g * H_N in G mod N, where H_N is
// the periodized image of H.  `bound` caps the number of full points
// enumerated (index explosion refusal).
Window build_coset_window(const GroupSpec& G, const Subgroup& Hsub, long long N,
                          long long bound = 4000000);

// The canonical window displacement: the element g with act(g, from) = to,
// free coordinates reduced to centered residues.  Verified before return.
GroupElement window_displacement(const Window& w, long long from, long long to);

// Local freeness report: which f in F have a fixed point (other than f = 1).
struct FreenessReport {
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};
FreenessReport check_local_freeness(const Window& w, const std::vector<GroupElement>& F);

// The set X^calH: points whose stabilizer behaves like a member of calH on
// the probe set: for every f in `probes`, f fixes x iff some H in calH
// contains f.  With empty calH (trivial marker) this demands fixed-point
// freeness on the probes.
std::vector<long long> points_with_stabilizer(const Window& w,
                                              const std::vector<CosetOracle>& calH,
                                              const std::vector<GroupElement>& probes);

// Brute-force stabilizer: the probes that fix x.
std::vector<GroupElement> stabilizer_probes(const Window& w, long long x,
                                            const std::vector<GroupElement>& probes);

// A chart realized on a window: forward table act(phi(v), x) over
// v in region, x in the window, plus an inverse index.
struct RealizedChart {
    std::shared_ptr<const Chart> chart;
    std::shared_ptr<const Window> window;
    Rect region;
    std::vector<GVec> vpts;                 // enumeration of region
    std::vector<long long> table;           // [v * num_points + x] -> point
    std::vector<std::unordered_map<long long, int>> inverse; // per x: y -> v index

    long long forward(size_t vi, long long x) const {
        return table[vi * static_cast<size_t>(window->num_points) + static_cast<size_t>(x)];
    }
    // Which v in region sends x to y?  -1 if none.
    int find_v(long long x, long long y) const {
        const auto& m = inverse[static_cast<size_t>(x)];
        auto it = m.find(y);
        return it == m.end() ? -1 : it->second;
    }
};

// Tabulates the realized action and validates injectivity of v -> phi(v)*x
// for every base point whose stabilizer matches calH (all points when calH
// is trivial).  Throws std::runtime_error naming (r, s, x) on collision;
// throws BudgetError when |region| * |window| exceeds `budget`.
RealizedChart realize_chart(std::shared_ptr<const Chart> c, std::shared_ptr<const Window> w,
                            const Rect& region, const Int& budget = Int(50000000));

} // namespace nilrect
