#pragma once

#include <bgx/isometry.hpp>
#include <bgx/modular_input.hpp>

namespace bgx {

// The two supported arithmetic groups: hat-O-plus (trivial action on the
// ambient discriminant group, mod +-1) and the full O-plus.
enum class GroupKind { Hat, Full };

inline const char* group_name(GroupKind g) { return g == GroupKind::Hat ? "hat" : "full"; }

// Exact image of a stabilizer in O(A_sub) x O(complement): phi acts on the
// discriminant group of the sublattice (as a permutation of elements), psi
// on the definite complement.
struct PairElement {
    DiscPermutation phi;
    MatZ psi;
};

struct StabPairs {
    std::vector<PairElement> pairs;
    std::vector<DiscPermutation> phi_mod_pm;  // image mod +-1, canonical reps
    std::vector<MatZ> psi_parts;              // image in O(complement)
    bool certified = false;                   // Nikulin rank certificate held
};

// Eichler class key of a primitive vector: (norm, divisor, l* mod the group
// allowed on A_{L0}).
struct VectorKey {
    Int norm;
    Int div;
    DiscElement lstar;  // canonical representative

    bool operator==(const VectorKey& o) const { return norm == o.norm && div == o.div && lstar == o.lstar; }
    bool operator<(const VectorKey& o) const {
        if (norm != o.norm) return norm > o.norm;  // shallow norms first
        if (div != o.div) return div < o.div;
        return lstar < o.lstar;
    }
};

struct Corank1Class {
    VectorKey key;
    VecZ witness;       // canonical representative vector in L0 coordinates
    MatZ sub_basis;     // embedding of L' = witness-perp
    MatZ comp_basis;    // embedding of the rank-1 complement
    Lattice sub_lattice;
    std::shared_ptr<const DiscriminantForm> sub_disc;
    int ramification = 1;                       // of the L' ⊂ L0 flag under Gamma
    std::vector<DiscPermutation> action;        // G_{L'} on A_{L'} mod +-1 (group, canonical reps)
};

struct Corank2Class {
    MatZ p_basis;   // embedding of the corank-2 sublattice P
    MatZ r_basis;   // embedding of the rank-2 definite complement R
    Lattice p_lattice;
    Lattice r_lattice;
    std::shared_ptr<const DiscriminantForm> p_disc;
    StabPairs stab;                             // pairs on (A_P, O(R))
    long group_order = 1;                       // |G_P|
    std::vector<DiscPermutation> action;        // G_P on A_P mod +-1
};

// One Gamma_{L'}-class of corank-1 sublattices of the carrier, i.e. one
// element of C(P, L'; Gamma), with the data the boundary map consumes.
struct FlagClass {
    int carrier = -1;       // index into corank1
    int target = -1;        // index into corank2
    VecZ flag_vector;       // l in L0 coordinates, inside the carrier rep
    Int norm;               // (l, l)
    Int div_in_carrier;
    DiscElement lstar_in_carrier;
    int ramification = 1;   // of the P_alpha ⊂ L' flag under Gamma_{L'}
    Int transfer_index = 1; // [G_P : G_{P_alpha/L'}]
};

struct OrbitTable {
    Lattice l0;
    GroupKind gamma = GroupKind::Hat;
    Rat bound;
    std::shared_ptr<const DiscriminantForm> l0_disc;
    std::vector<Corank1Class> corank1;
    std::vector<Corank2Class> corank2;
    std::vector<FlagClass> flags;  // grouped by carrier, canonical order

    std::vector<int> flags_of_carrier(int carrier_idx) const {
        std::vector<int> out;
        for (size_t i = 0; i < flags.size(); ++i)
            if (flags[i].carrier == carrier_idx) out.push_back(static_cast<int>(i));
        return out;
    }
};

// Indices of an explicit 2U block in the basis of L: (e1, f1, e2, f2).
// Fails with unsupported_regime when no visible block exists.
std::array<int, 4> find_2u_block(const Lattice& l);

// Corank-1 classification under the Eichler criterion; every class that can
// carry nonzero order data for pole depths <= bound.
std::vector<Corank1Class> classify_corank1(const Lattice& l0, GroupKind gamma, const Rat& bound);

// Full table including corank-2 classes and flags (used by the complex).
OrbitTable classify(const Lattice& l0, GroupKind gamma, const Rat& bound, bool with_corank2);

// Ramification index of the projection along the divisor of the sublattice
// with the given rank-1 complement: 2 when id ⊕ -id extends to an element
// of Gamma, else 1.
int ramification_index(const Lattice& l0, const MatZ& sub_basis, const MatZ& comp_basis, GroupKind gamma);

// Ramification of a flag P ⊂ L' ⊂ L0: 2 when id_P ⊕ -id on the rank-1
// complement of P inside L' preserves L' and extends, with some companion on
// the complement of L', to an element of Gamma.
int flag_ramification(const Lattice& l0, const MatZ& carrier_sub, const MatZ& carrier_comp,
                      const MatZ& p_in_carrier, const MatZ& l_in_carrier, GroupKind gamma);

// Image of O+(L0) on A_{L0} permitted by the group label: for Hat only
// {id, -id}; for Full the exact image (certified).
std::vector<DiscPermutation> ambient_action_group(const Lattice& l0, GroupKind gamma,
                                                  const DiscriminantForm& disc);

// Exact stabilizer pairs of a primitive sublattice with definite complement.
StabPairs stabilizer_pairs(const Lattice& l0, const MatZ& sub_basis, const MatZ& comp_basis, GroupKind gamma);

// Transvection-chain (plus sign and allowed ambient swaps) mapping `from`
// to +-`to`; returns the isometry of L0 when found.
std::optional<MatZ> connect_vectors(const Lattice& l0, const VecZ& from, const VecZ& to, GroupKind gamma);

// Key of a primitive vector, canonicalized for the group.
VectorKey vector_key(const Lattice& l0, const DiscriminantForm& disc, const VecZ& l, GroupKind gamma);

// Transfer average: sum of gamma * omega over coset representatives of the
// subgroup inside the group (actions as A-permutations mod +-1 on inputs).
ModularInput transfer_average_input(const ModularInput& f, const std::vector<DiscPermutation>& group,
                                    const std::vector<DiscPermutation>& subgroup);

// Coset representatives of subgroup inside group (both mod +-1, canonical).
std::vector<DiscPermutation> coset_representatives(const std::vector<DiscPermutation>& group,
                                                   const std::vector<DiscPermutation>& subgroup,
                                                   const DiscPermutation& neg);

}  // namespace bgx
