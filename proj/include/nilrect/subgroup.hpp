// subgroup.hpp
// Finitely generated subgroups of catalog groups, with bounded-ball
// membership testing and the conjugacy demo over truncated direct sums of
// Heisenberg groups.
//
// Membership is decided by breadth-first enumeration of generator words
// whose coordinates stay within a caller-supplied ball.  If the closure
// completes without pruning, "no" is definitive; if any expansion was
// pruned, a negative answer degrades to "inconclusive" -- never a false
// positive or false negative.

#pragma once

#include "nilrect/group.hpp"

#include <optional>
#include <vector>

namespace nilrect {

struct Subgroup {
    GroupSpec ambient;
    std::vector<GroupElement> generators;
};

enum class Tri { Yes, No, Inconclusive };

const char* tri_name(Tri t);

// Is g a product of generators and inverse generators, using only
// intermediate elements all of whose coordinates have absolute value at
// most `ball`?  (Torsion coordinates are always within range.)
Tri subgroup_member(const Subgroup& H, const GroupElement& g, const Int& ball,
                    const Int& state_budget = Int(2000000));

// H_x = < a_i^{-1} c_i^{x(i)} : i < N >  inside  sum(heisenberg, N),
// where in factor i the generators are a_i = (1,0,0), b_i = (0,1,0),
// c_i = (0,0,1), so a_i^{-1} c_i^{x(i)} has factor-i coordinates (-1,0,x(i)).
Subgroup hx_subgroup(const std::vector<int>& x);

// Exact membership oracle for the special shape of H_x: an element lies in
// H_x iff in every factor i its coordinates are (-k, 0, k*x(i)) for some
// integer k.  This closed form is independent of the word search above and
// lets the conjugator search return a definitive negative.
bool hx_member_exact(const std::vector<int>& x, const GroupElement& g);

// Recovers the word x from a subgroup produced by hx_subgroup (or an exact
// conjugate of one); nullopt when the generators do not have that shape.
std::optional<std::vector<int>> hx_recover_word(const Subgroup& H);

struct ConjugatorResult {
    Tri status = Tri::Inconclusive;       // Yes: g found and certified
    std::optional<GroupElement> g;        // present iff status == Yes
    std::string note;                     // human-readable explanation
};

// Searches for g with g H_x g^{-1} = H_y.  Without a support restriction it
// tries the canonical candidate g = prod b_i^{y(i)-x(i)} and certifies it by
// conjugating every generator of H_x and testing membership in H_y (and the
// reverse direction) within `ball`.  With `support` present, g is restricted
// to factors in the support: candidates are exhaustively enumerated with
// per-coordinate exponents in [-exp_bound, exp_bound]; if no candidate
// certifies and no test was inconclusive, the answer is a definitive No.
ConjugatorResult conjugator_search(const Subgroup& Hx, const Subgroup& Hy, const Int& ball,
                                   const std::optional<std::vector<int>>& support = std::nullopt,
                                   long long exp_bound = 2);

} // namespace nilrect
