// rect_laws.hpp
// Property verifier for the rectangle arithmetic laws: nine clauses in all
// (seven for the basic scaling/sum laws, two for the "meets" laws).  Each
// clause generates random instances satisfying its hypotheses and checks the
// conclusion by exact integer arithmetic; any counterexample would falsify
// the implementation.

#pragma once

#include "nilrect/rect.hpp"

#include <string>
#include <vector>

namespace nilrect {

struct ClauseResult {
    std::string name;            // e.g. "basic(iv)"
    long long trials = 0;
    std::vector<std::string> failures; // human-readable counterexamples (first few)
    bool pass() const { return failures.empty(); }
};

struct RectLawReport {
    std::vector<ClauseResult> clauses;
    bool all_pass() const {
        for (const auto& c : clauses) if (!c.pass()) return false;
        return true;
    }
    std::string to_text() const;
};

// Runs `trials` hypothesis-satisfying instances per clause.
RectLawReport verify_rect_laws(long long trials, std::uint64_t seed);

} // namespace nilrect
