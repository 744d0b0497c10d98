#pragma once

#include <bgx/discform.hpp>

namespace bgx {

// A primitive sublattice of an ambient lattice, stored as an embedding:
// columns are ambient coordinates of a basis.
struct Sublattice {
    MatZ basis;  // ambient_rank x sub_rank

    int rank() const { return basis.cols(); }
};

// {x in L : (x, s) = 0 for all s in S}; S given by columns. Returns the full
// lattice when S has no columns. The result is primitive by construction.
Sublattice orth_complement(const Lattice& l, const MatZ& s_columns);

inline Sublattice orth_complement(const Lattice& l, const VecZ& s) {
    MatZ m(static_cast<int>(s.size()), 1);
    for (size_t i = 0; i < s.size(); ++i) m(static_cast<int>(i), 0) = s[i];
    return orth_complement(l, m);
}

// Smallest primitive sublattice containing the column span.
Sublattice saturation(const Lattice& l, const MatZ& s_columns);

// Finite-index orthogonal decomposition data for Lp ⊕ K ⊂ L.
struct GlueData {
    MatZ lp_basis;  // embedding of L'
    MatZ k_basis;   // embedding of K
    Int index = 1;  // [L : L' ⊕ K]

    DiscriminantForm disc_lp;
    DiscriminantForm disc_k;
    DiscriminantForm disc_l;

    // Generators of L/(L'⊕K) inside A_{L'} ⊕ A_K.
    std::vector<std::pair<DiscElement, DiscElement>> glue_gens;

    // For each (a, b) in A_{L'} ⊕ A_K: the image in A_L when the coset lies
    // in L^dual/(L'⊕K), absent otherwise. Indexed by
    // index_of(a) * |A_K| + index_of(b).
    std::vector<std::optional<DiscElement>> coset_lift;

    long supported_count() const {
        long c = 0;
        for (const auto& e : coset_lift)
            if (e) ++c;
        return c;
    }
};

// Requires Lp ⟂ K in L and Lp ⊕ K of finite index in L.
GlueData glue(const Lattice& l, const MatZ& lp_basis, const MatZ& k_basis);

// Convenience: complement pair (S, S^perp) of a primitive sublattice.
GlueData glue_with_complement(const Lattice& l, const MatZ& lp_basis);

}  // namespace bgx
