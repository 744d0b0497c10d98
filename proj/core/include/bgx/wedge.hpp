#pragma once

#include <bgx/obstruction.hpp>

namespace bgx {

// Exterior powers are handled in coordinates: a basis of wedge^q of an
// m-dimensional space is indexed by the strictly increasing q-tuples.
std::vector<std::vector<int>> wedge_tuples(int dim, int q);

// Action induced on wedge^q by a linear action on the underlying space:
// entries are q x q minors.
MatQ wedge_matrix(const MatQ& action, const std::vector<std::vector<int>>& tuples);

// Basis of the G-invariant part of wedge^q of a term space, as columns over
// the tuple coordinates. `actions` are the basis-space actions of the group
// elements (square matrices of size space-dim).
MatQ invariant_wedge_basis(const std::vector<MatQ>& actions, int dim, int q);

// Action matrices of a discriminant permutation group on a term basis.
std::vector<MatQ> basis_actions(const TruncatedSpace& space, const MatQ& term_basis,
                                const std::vector<DiscPermutation>& group);

}  // namespace bgx
