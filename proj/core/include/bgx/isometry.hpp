#pragma once

#include <bgx/lattice.hpp>

#include <optional>

namespace bgx {

// Isometry between definite lattices of equal rank, as a matrix T with
// T^T Ga T = Gb mapping b-coordinates to a-coordinates.
std::optional<MatZ> definite_isometry(const Lattice& a, const Lattice& b);

struct AutGroup {
    std::vector<MatZ> generators;  // all nontrivial elements double as generators here
    Int order = 1;
    std::vector<MatZ> elements;    // full list including identity
};

// Full automorphism group of a definite lattice, by backtracking over
// norm-preserving images of the basis. Intended scale: rank <= 8, tiny groups.
AutGroup definite_aut_group(const Lattice& a);

// Negative-definite even lattices of rank r with |det| <= d, one per
// isometry class, sorted by (|det|, gram entries).
std::vector<Lattice> classify_definite(int r, const Int& det_bound);

// Isometries of an arbitrary (possibly indefinite) lattice whose matrix
// entries are bounded by `height`; complete for that box, not for the group.
std::vector<MatZ> bounded_isometries(const Lattice& a, long height);

// Isometries a -> b (a-coordinates to b-coordinates) with bounded entries.
std::vector<MatZ> bounded_isometries_between(const Lattice& a, const Lattice& b, long height);

}  // namespace bgx
