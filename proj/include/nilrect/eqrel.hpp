// eqrel.hpp
// Finite equivalence relations on window points, stored as a class-id per
// point with ids numbered contiguously in order of first appearance.
// Relations built by the rectangular machinery may carry per-class rough
// witnesses (B, delta, base); verifiers treat those as claims to re-check,
// never as facts.

#pragma once

#include "nilrect/rect.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace nilrect {

struct RoughWitness {
    Rect B;          // the witness rectangle (center + radii)
    Rat delta;       // the rough tolerance
    long long base;  // window point serving as the rough base
};

struct EqRel {
    long long num_points = 0;
    long long num_classes = 0;
    std::vector<long long> class_id;                    // point -> class
    std::unordered_map<long long, RoughWitness> witness; // class -> claimed witness

    std::vector<std::vector<long long>> classes() const;
    std::vector<long long> class_members(long long cls) const;
};

// Builds an EqRel from an arbitrary labeling, renumbering labels to
// contiguous ids in order of first appearance.
EqRel eqrel_from_labels(const std::vector<long long>& labels);

// Every point its own class.
EqRel eqrel_equality(long long n);

// One class containing everything.
EqRel eqrel_full(long long n);

// True iff every F-class is contained in a single E-class.
bool eqrel_refines(const EqRel& F, const EqRel& E);

// The common refinement (meet): classes are intersections of classes.
EqRel eqrel_meet(const EqRel& E, const EqRel& F);

bool same_partition(const EqRel& E, const EqRel& F);

// One line per point: "<point> <class>".
std::string eqrel_to_text(const EqRel& E);

} // namespace nilrect
