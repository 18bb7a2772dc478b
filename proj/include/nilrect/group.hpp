// group.hpp
// A closed catalog of finitely generated nilpotent groups with exact
// arithmetic in Mal'cev-style coordinates: free-abelian groups, finite
// cyclic groups, the integer Heisenberg group, finite direct products, and
// truncated direct sums.  Multiplication laws are hand-coded closed forms;
// the Heisenberg law is cross-checked against unitriangular matrices in the
// tests.

#pragma once

#include "nilrect/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nilrect {

struct GroupSpec {
    enum class Kind { FreeAbelian, Cyclic, Heisenberg, Product, Sum };

    Kind kind = Kind::FreeAbelian;
    int rank = 0;                   // FreeAbelian: rank n >= 0
    Int order = 0;                  // Cyclic: order m >= 1
    std::vector<GroupSpec> factors; // Product: nonempty list; Sum: the single summand
    int count = 0;                  // Sum: number of copies >= 1

    bool operator==(const GroupSpec&) const = default;

    // Total number of integer coordinates in the flat layout.
    int num_coords() const;
};

GroupSpec free_abelian(int n);
GroupSpec cyclic(const Int& m);
GroupSpec heisenberg();
GroupSpec product(std::vector<GroupSpec> factors);
GroupSpec truncated_sum(GroupSpec summand, int count);

// Coordinate layout: factors are laid out left to right.  FreeAbelian(n)
// contributes n free coordinates, Cyclic(m) one coordinate reduced mod m,
// Heisenberg three coordinates (a, b, c) with law
//   (a,b,c)(a',b',c') = (a+a', b+b', c+c'-a'b),
// so the commutator [a,b] = a^{-1}b^{-1}ab equals c.

struct GroupElement {
    GroupSpec spec;
    std::vector<Int> coords;

    bool operator==(const GroupElement&) const = default;
    bool operator<(const GroupElement& o) const { return coords < o.coords; }
};

GroupElement identity(const GroupSpec& G);
GroupElement make_element(const GroupSpec& G, std::vector<Int> coords); // reduces torsion coords
GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement invert(const GroupElement& g);
GroupElement conjugate(const GroupElement& g, const GroupElement& by);  // by * g * by^{-1}
GroupElement commutator(const GroupElement& g, const GroupElement& h);  // g^{-1} h^{-1} g h
GroupElement power(const GroupElement& g, const Int& n);
bool is_identity(const GroupElement& g);

int hirsch_length(const GroupSpec& G);
int nilpotency_class(const GroupSpec& G);

// Center and central quotient.  For every catalog group the center is a
// coordinate subgroup: a subset of the coordinates, with the remaining
// coordinates forming the quotient's layout.
struct CenterDecomposition {
    // Center as Z^{ell1} x Gamma1.
    int ell1 = 0;                       // free rank of the center
    std::vector<Int> gamma1;            // torsion orders of the center
    std::vector<int> center_free_coords;    // ambient coordinate index per free generator
    std::vector<int> center_torsion_coords; // ambient coordinate index per torsion generator

    GroupSpec quotient;                 // G / center
    std::vector<int> quotient_coords;   // ambient coordinate index per quotient coordinate

    GroupSpec ambient;

    // iso: center coordinates (ell1 free values then torsion residues) -> central element of G.
    GroupElement embed_center(const std::vector<Int>& v) const;
    // Inverse of embed_center on central elements (throws if g is not in the
    // coordinate center).
    std::vector<Int> center_coords(const GroupElement& g) const;

    GroupElement project(const GroupElement& g) const; // G -> quotient
    GroupElement lift(const GroupElement& q) const;    // section quotient -> G (zeros elsewhere)
};

CenterDecomposition center_decomposition(const GroupSpec& G);

// Canonical text form: `heisenberg`, `Z^3`, `C6`, `C6 x heisenberg`,
// `sum(heisenberg, 4)`, `trivial`.
std::string group_to_text(const GroupSpec& G);
std::optional<GroupSpec> group_from_text(const std::string& s);

std::string element_to_text(const GroupElement& g);

} // namespace nilrect
