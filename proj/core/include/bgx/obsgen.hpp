#pragma once

#include <bgx/obstruction.hpp>

#include <optional>

namespace bgx {

// Coefficient tables for the realizability functionals of lattices of shape
// 2U + (A1 summands): the discriminant form is 2-elementary with diagonal
// pairing and q = -1/2 on every generator. Components are assembled from the
// unary theta of <2> and its Serre derivative, so every emitted table comes
// from an exact holomorphic construction:
//  - one slot: no cusp conditions (the relevant weight has none),
//  - two slots: the single antisymmetric bracket of the slot thetas,
//  - the constant-term functional from the normalized derivative of the
//    full theta product.
// Returns nothing when the form is outside this family (no tables shipped;
// callers fall back to the formal space).
std::optional<ObstructionBasis> theta_obstruction_tables(const DiscriminantForm& d, const Rat& coverage);

}  // namespace bgx
