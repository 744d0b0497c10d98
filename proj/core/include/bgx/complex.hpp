#pragma once

#include <bgx/orbits.hpp>
#include <bgx/wedge.hpp>

#include <map>

namespace bgx {

// One graded term of the assembled complex: a class together with the basis
// of (wedge^q of) its truncated input space, everything in fixed coordinates.
struct TermSpace {
    TruncatedSpace space;       // truncated inputs on the class lattice
    MatQ term_basis;            // invariant subspace, columns over coords
    int wedge_q = 1;            // exterior power placed in the complex
    std::vector<std::vector<int>> tuples;   // wedge coordinate index tuples
    MatQ wedge_basis;           // invariant wedge basis over tuple coords

    long dim() const { return wedge_basis.cols(); }
};

struct ComplexInstance {
    Lattice l0;
    GroupKind gamma = GroupKind::Hat;
    int p = 2;
    Rat bound;
    Rat trunc;
    OrbitTable table;

    TermSpace degree0;                      // wedge^p on L0
    std::vector<TermSpace> degree1;         // wedge^{p-1} per corank-1 class
    // degree 2 (for p = 2): free space over corank-2 classes.

    MatQ d0;  // degree 0 -> degree 1
    MatQ d1;  // degree 1 -> degree 2
    std::vector<long> degree1_offsets;

    std::vector<long> dims() const;
};

// Obstruction data indexed by discriminant fingerprint; empty entries mean
// formal spaces.
using ObstructionSet = std::vector<ObstructionBasis>;

const ObstructionBasis* match_obstruction(const ObstructionSet& set, const DiscriminantForm& d);

ComplexInstance assemble_complex(const Lattice& l0, GroupKind gamma, int p, const Rat& bound, const Rat& trunc,
                                 const ObstructionSet& obstructions, int jobs = 1);

struct D2Report {
    bool zero = true;
    std::vector<std::string> failures;  // per nonzero entry: location and value
};

D2Report verify_d2(const ComplexInstance& inst);

std::vector<long> cohomology_ranks(const ComplexInstance& inst);

// Residue of a decomposable or general wedge element, given by coordinates
// in the degree-0 wedge basis, into the degree-1 term of one class.
// Exposed for tests; assemble_complex uses the same path.
MatQ residue_matrix(const ComplexInstance& inst, int class_index);

// Divisor-style boundary of a chain of inputs sitting on corank-1 classes:
// value per corank-2 class of sum over flags of transfer * nu.
struct ChainEntry {
    int class_index;
    ModularInput input;
};

std::vector<Rat> boundary_values(const OrbitTable& table, const std::vector<ChainEntry>& chain);

struct CocycleReport {
    bool pass = true;
    std::vector<std::string> residuals;
};

// (p,1)-style check: the boundary of the chain vanishes on every corank-2
// class of the table.
CocycleReport cocycle_check_p1(const OrbitTable& table, const std::vector<ChainEntry>& chain);

// (p,2)-style check for p = 2: for every corank-1 class the combination
// sum_i nu(f_i) g_i - nu(g_i) f_i quasi-pulls back to zero.
CocycleReport cocycle_check_p2(const OrbitTable& table,
                               const std::vector<std::pair<ModularInput, ModularInput>>& chain, const Rat& trunc);

// Order value nu = nutilde / ramification of an input along a corank-1 class.
Rat nu_value(const Corank1Class& cls, const ModularInput& f);

// Order value along a flag inside a carrier.
Rat nu_value(const FlagClass& flag, const ModularInput& f);

}  // namespace bgx
