#pragma once

#include <bgx/solve.hpp>

namespace bgx {

// One linear functional on truncated principal parts: a table of coefficients
// a(lambda, m) for m > 0 (pairing value is sum of c(lambda, n) a(lambda, -n)).
// The c00 functional carries the weight-raising series used to decide the
// constant term; its kernel is the c00 = 0 cut.
struct ObstructionFunctional {
    bool is_c00 = false;
    std::map<std::pair<std::vector<Int>, Rat>, Rat> table;  // (residues, positive exponent) -> value
    Rat coverage = 0;                                        // exponents covered up to this bound
};

struct ObstructionBasis {
    std::vector<Int> orders;   // discriminant fingerprint
    std::vector<Rat> q_values; // per element, elements() order
    Rat weight;
    std::vector<ObstructionFunctional> functionals;

    bool matches(const DiscriminantForm& d) const;
};

// Pairing values of an input against every functional.
std::vector<Rat> obstruction_pair(const ModularInput& f, const ObstructionBasis& ob);

enum class SpaceMode { Formal, Realizable, RealizableC00 };

// Truncated model space of inputs with pole depth <= bound: the formal space
// or the joint kernel of the obstruction functionals (plus the c00 cut when
// the c00 functional is present).
struct TruncatedSpace {
    AdmissibleCoords coords;
    MatQ basis;  // dim(coords) x dim(space), canonical echelon columns
    SpaceMode mode = SpaceMode::Formal;

    long dim() const { return basis.cols(); }
    ModularInput vector(long j) const { return coords.to_input(basis.col(static_cast<int>(j))); }
    // Coordinates of an input in this basis; error when outside the span.
    VecQ coordinates(const ModularInput& f) const;
};

TruncatedSpace formal_space(std::shared_ptr<const DiscriminantForm> disc, const Rat& bound);
TruncatedSpace realizable_space(std::shared_ptr<const DiscriminantForm> disc, const Rat& bound,
                                const ObstructionBasis& ob);

// Exact basis of the subspace fixed by a group of coordinate actions
// (Reynolds average followed by column reduction). Actions permute the
// element orbits of the discriminant group.
MatQ invariant_subspace(const TruncatedSpace& space, const std::vector<DiscPermutation>& group);

}  // namespace bgx
