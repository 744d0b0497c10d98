#pragma once

#include <bgx/lattice.hpp>

#include <functional>

namespace bgx {

// All x in (shift + Z^n) with 0 < Q(x) <= bound, plus x = shift-class zero
// when the zero vector lies in the coset and include_zero is set.
// Q is given by a positive definite Gram matrix; everything exact.
struct ShortVectorEntry {
    VecQ x;     // coset vector (integral when shift is zero)
    Rat norm;   // Q(x)
};

// Enumerates the coset shift + Z^n against Q(x) = x^T gram x <= bound.
// Callback order is deterministic (lexicographic from the last coordinate).
void enumerate_coset(const MatZ& gram, const VecQ& shift, const Rat& bound, bool include_zero,
                     const std::function<void(const ShortVectorEntry&)>& emit);

// Nonzero lattice vectors of a positive definite lattice with Q(x) <= bound.
std::vector<ShortVectorEntry> short_vectors(const Lattice& l, const Rat& bound);

// Coset version: vectors of shift + L in L^dual. Includes the zero vector
// when it lies in the coset (norm 0) only if include_zero.
std::vector<ShortVectorEntry> short_vectors_coset(const Lattice& l, const VecQ& shift, const Rat& bound,
                                                  bool include_zero);

}  // namespace bgx
