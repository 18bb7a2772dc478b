// markers.hpp
// Greedy marker sets, the bounded marker partition, and the deterministic
// selector on windows.  On a finite window the countable clopen base
// degenerates to the point enumeration, so the inductive constructions
// become single greedy passes; every build is followed by an independent
// brute-force verification.

#pragma once

#include "nilrect/eqrel.hpp"
#include "nilrect/window.hpp"

#include <string>
#include <vector>

namespace nilrect {

struct MarkerSet {
    std::vector<long long> members;     // sorted point indices
    std::vector<GroupElement> F;        // the finite symmetric set used
    std::vector<long long> Z;           // the target point class (sorted)
};

// Greedy marker construction over the window's point enumeration: admit z
// into Y iff z is not yet covered by F . Y.
// Preconditions (checked): F symmetric with 1 in F; every nonidentity g in F
// acts freely on Z.  Violations throw std::invalid_argument naming (x, g).
MarkerSet build_marker_set(const Window& w, const std::vector<GroupElement>& F,
                           const std::vector<long long>& Z);
MarkerSet build_marker_set(const Window& w, const std::vector<GroupElement>& F); // Z = all

// Independent double-loop verification of both marker invariants:
// separation (no nonidentity g in F maps one member to another) and
// coverage (every z in Z is act(g, y) for some member y, g in F).
struct MarkerCheck {
    bool separated = false;
    bool covering = false;
    std::string witness; // first violation, if any
    bool pass() const { return separated && covering; }
};
MarkerCheck verify_marker_set(const Window& w, const MarkerSet& m);

// Iterated marker construction partitioning Y into at most |F|+1 classes,
// each F-separated.  Throws std::logic_error if the bound is ever exceeded.
std::vector<std::vector<long long>> partition_marker(const Window& w,
                                                     const std::vector<GroupElement>& F,
                                                     const std::vector<long long>& Y);

// Selector for a finite relation whose classes are K-bounded:
// S(x) = the enumeration-least member of [x]_E.  The K-bound
// ([x]_E subset of K . x for every x) is verified first; a violation throws
// std::invalid_argument naming the class.
std::vector<long long> build_selector(const Window& w, const EqRel& E,
                                      const std::vector<GroupElement>& K);

// Marker dump: header naming F, Z and the enumeration-order hash, then one
// member index per line.
std::string marker_to_text(const Window& w, const MarkerSet& m);

} // namespace nilrect
