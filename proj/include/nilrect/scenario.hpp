// scenario.hpp
// Scenario files: the declarative inputs of the pipeline.  A scenario names
// a catalog group, a window period, and an increasing subgroup chain with
// per-level geometric constants.  The text form is versioned and round-trips
// bit-exactly.

#pragma once

#include "nilrect/group.hpp"
#include "nilrect/rect.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nilrect {

// Per-level construction knobs.  The multipliers default to the reference
// constants (partition 13p, scan 7p, blocks 9d+1, orthogonality dilation
// 30*ell, guards 3 and 64*ell*q); scenarios may relax them, and the strict
// mode refuses relaxed values.
struct LevelKnobs {
    std::optional<Rat> partition_mult; // default 13 * p
    std::optional<Rat> scan_mult;      // default 7 * p
    std::optional<Rat> block_mult;     // default 9
    std::optional<Rat> ortho_dilation; // default 30 * ell
    std::optional<Rat> guard2_mult;    // default 3
    std::optional<Rat> guard3_mult;    // default 64 * ell
    std::optional<Rat> marker_mult;    // default 3p/4

    bool operator==(const LevelKnobs&) const = default;
};

struct LevelSpec {
    std::vector<GroupElement> generators; // generating set U_k of G_k
    std::vector<Int> zee;                 // Zee radii (length = level rank)
    std::vector<Int> A;                   // base rectangle radii
    Rat epsilon;
    Rat q;
    long long p = 0;
    LevelKnobs knobs;

    bool operator==(const LevelSpec&) const = default;
};

struct Scenario {
    int version = 1;
    GroupSpec group;
    long long period = 0;
    std::uint64_t seed = 0;
    Int budget = 0;
    std::vector<LevelSpec> levels; // level k = chain member G_{k+1}

    bool operator==(const Scenario&) const = default;
};

std::string scenario_to_text(const Scenario& s);
// Returns nullopt (with *error set when provided) on malformed input.
std::optional<Scenario> scenario_from_text(const std::string& text, std::string* error = nullptr);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

// Scale validation: every containment hypothesis used downstream, checked at
// the configured constants, plus period-vs-diameter checks and a note when
// the reference (non-relaxed) constants would be unenumerable.
struct ScaleCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};
struct ScaleReport {
    std::vector<ScaleCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks) if (!c.pass) return false;
        return true;
    }
    std::string to_text() const;
};
ScaleReport validate_scales(const Scenario& s);

} // namespace nilrect
