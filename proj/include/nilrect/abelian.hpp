// abelian.hpp
// Exact linear algebra over the integers for finitely generated abelian
// groups: Smith normal form, quotients by finitely generated subgroups with
// canonical coordinates and sections, and exact subgroup membership.
//
// An ambient abelian group is Z^{n_free} x prod C_{m_j}, with coordinates
// laid out as the free coordinates followed by the torsion residues.

#pragma once

#include "nilrect/numeric.hpp"

#include <vector>

namespace nilrect {

using IMat = std::vector<std::vector<Int>>; // row-major

// U * A_input * V = D with U, V unimodular and D diagonal (nonnegative
// diagonal entries).  Uinv is the exact integer inverse of U.
struct SmithResult {
    IMat D, U, Uinv, V;
};

SmithResult smith_normal_form(IMat A);

// The quotient of Z^{n_free} x prod torsion by the subgroup generated by
// `subgens` (each a full ambient coordinate vector).  The quotient is again
// presented as Z^{ell} x prod gamma.
struct AbelianQuotient {
    int n_free = 0;
    std::vector<Int> torsion;

    int ell = 0;              // free rank of the quotient
    std::vector<Int> gamma;   // nontrivial cyclic orders of the quotient

    // Internals: w = U * v diagonalizes the relation lattice; modulus[i] is
    // the diagonal relation on coordinate i of w (0 = none, 1 = collapsed).
    IMat U, Uinv;
    std::vector<Int> modulus;
    std::vector<int> free_pos;    // positions of w with modulus 0
    std::vector<int> cyclic_pos;  // positions of w with modulus > 1

    // Quotient coordinates of an ambient element (ell values then residues).
    std::vector<Int> to_quotient(const std::vector<Int>& v) const;
    // Canonical ambient representative of a quotient element (the section).
    std::vector<Int> lift(const std::vector<Int>& q) const;
    // Exact membership of v in the subgroup (the kernel of to_quotient).
    bool in_subgroup(const std::vector<Int>& v) const;
};

AbelianQuotient abelian_quotient(int n_free, std::vector<Int> torsion, const IMat& subgens);

} // namespace nilrect
