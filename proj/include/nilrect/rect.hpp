// rect.hpp
// Centered rectangles in Z^ell x Gamma and their nonstandard arithmetic:
// floor-scaling about the center, faces, the radius-wise order, Minkowski
// sums, membership and budgeted enumeration.
//
// Model: a rectangle is the set { v : |v_i - c_i| <= r_i for 1 <= i <= ell }
// with the torsion coordinate unrestricted (every rectangle contains all of
// Gamma in its last coordinate).  Scaling by a rational acts only on the
// free coordinates and floors the radii; scaling never moves the center,
// except that a negative scalar negates the center first.

#pragma once

#include "nilrect/numeric.hpp"

#include <optional>
#include <vector>

namespace nilrect {

// The finite abelian torsion factor Gamma, as a product of cyclic groups.
struct GammaSpec {
    std::vector<Int> orders; // each >= 1

    Int size() const {
        Int s = 1;
        for (const Int& m : orders) s *= m;
        return s;
    }
    bool operator==(const GammaSpec&) const = default;
};

// A vector with ell free coordinates and a Gamma coordinate.
struct GVec {
    std::vector<Int> z;   // free part, length ell
    std::vector<Int> t;   // torsion part, residues mod GammaSpec orders

    bool operator==(const GVec&) const = default;
    bool operator<(const GVec& o) const {
        if (z != o.z) return z < o.z;
        return t < o.t;
    }
};

GVec gvec_add(const GVec& a, const GVec& b, const GammaSpec& g);
GVec gvec_sub(const GVec& a, const GVec& b, const GammaSpec& g);
GVec gvec_neg(const GVec& a, const GammaSpec& g);
GVec gvec_zero(int ell, const GammaSpec& g);
GVec gvec_unit(int ell, const GammaSpec& g, int axis); // e_i, 1-based axis

struct Rect {
    int ell = 0;
    GammaSpec gamma;
    std::vector<Int> center; // free coordinates of the center; torsion = identity
    std::vector<Int> radius; // componentwise >= 0

    bool centered() const {
        for (const Int& c : center) if (c != 0) return false;
        return true;
    }
    bool operator==(const Rect&) const = default;
};

// Constructors ---------------------------------------------------------

// Rec(a): the centered rectangle of the given radii.
Rect rec(const GammaSpec& gamma, const std::vector<Int>& radii);
Rect rec_uniform(int ell, const GammaSpec& gamma, const Int& radius);

// Operations -----------------------------------------------------------

// scale(lambda, A): radius_i = floor(|lambda| * L_i(A)); a negative lambda
// negates the center first ("-lambda * A is centered at -c").
Rect scale(const Rat& lambda, const Rect& A);

// A^i: flatten axis i (1-based).
Rect face(const Rect& A, int axis);

// The radius-wise order A ⊑ B (translation-invariant).
bool fits_in(const Rect& A, const Rect& B);

// Translation by a free vector.
Rect translate(const std::vector<Int>& t, const Rect& A);
// Convenience: translate by c * e_axis.
Rect translate_axis(const Int& c, int axis, const Rect& A);

Rect negate(const Rect& A);

// Elementwise (Minkowski) sum: centers add, radii add.
Rect minkowski_sum(const Rect& A, const Rect& B);

Int cardinality(const Rect& A);

bool member(const GVec& v, const Rect& A);

// Set containment / intersection as subsets of Z^ell x Gamma (centers
// matter; torsion is always full).
bool subset_of(const Rect& A, const Rect& B);
bool meets(const Rect& A, const Rect& B);

// Budgeted enumeration in lexicographic order (free coordinates ascending,
// then torsion).  Throws std::length_error when |A| exceeds the budget.
std::vector<GVec> enumerate(const Rect& A, const Int& budget);

// Canonical text form: rect(center=[..]; radius=[..]; gamma=[..]).
std::string rect_to_text(const Rect& A);
std::optional<Rect> rect_from_text(const std::string& s);

} // namespace nilrect
