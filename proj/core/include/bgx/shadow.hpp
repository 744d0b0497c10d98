#pragma once

#include <bgx/complex.hpp>

namespace bgx {

// Divisor-level model of the K-theory side. Symbols are labels: an input
// form standing for its multiplicative lift on the cycle of a class.
struct FunctionSymbol {
    int class_index = -1;  // corank-1 class of the table (the carrier cycle)
    ModularInput label;
};

struct DivisorOnCycle {
    int carrier = -1;
    // Multiplicity per flag class inside the carrier (orders upstairs,
    // i.e. the raw sums of principal-part coefficients).
    std::vector<std::pair<int, Rat>> multiplicities;  // (flag index, value)
};

// Orders of the lifted label along every flag divisor of its carrier.
DivisorOnCycle divisor_of(const OrbitTable& table, const FunctionSymbol& s);

// Wedge of symbols on one carrier, reduced along one flag by the valuation
// formula: the q = 1 case returns the integer order; q = 2 returns the
// label (nu(f) g - nu(g) f) pulled back to the flag target.
struct TameOutput {
    Rat order;                 // q = 1 value
    bool has_label = false;
    ModularInput label;        // q = 2 value on the target class lattice
};

TameOutput tame_symbol_shadow(const OrbitTable& table, int flag_index, const std::vector<ModularInput>& symbols,
                              const Rat& trunc);

// Two routes for the boundary at divisor level (q = 1): route A through the
// assembled class bookkeeping (transfers times normalized orders over the
// C-set), route B through an independent re-enumeration of the preimage
// components with inertia factors. Exact equality required.
struct ChainMapReport {
    bool pass = true;
    std::vector<std::string> mismatches;
};

ChainMapReport chain_map_check_q1(const OrbitTable& table, const std::vector<ChainEntry>& chain);

// q = 2 comparison on the ambient lattice: route A evaluates the residue
// through the complex machinery; route B applies the valuation formula with
// unit-part reduction via quasi-pullback. Exact equality of labels.
ChainMapReport chain_map_check_q2(const OrbitTable& table, const ModularInput& f, const ModularInput& g,
                                  const Rat& trunc);

}  // namespace bgx
