#pragma once

#include <bgx/modular_input.hpp>

namespace bgx {

// Coordinate system for truncated principal parts: one coordinate per
// orbit {lambda, -lambda} and admissible exponent in [-bound, 0).
// Ordered shallow poles first, then element order; this fixes solver
// pivoting and all basis orderings downstream.
struct AdmissibleCoords {
    std::shared_ptr<const DiscriminantForm> disc;
    Rat bound;
    std::vector<std::pair<DiscElement, Rat>> coords;  // (orbit rep, exponent)

    long dim() const { return static_cast<long>(coords.size()); }
    long find(const DiscElement& e, const Rat& n) const;
    ModularInput to_input(const VecQ& x, const Rat& c00 = Rat(0)) const;
    VecQ from_input(const ModularInput& f) const;
};

AdmissibleCoords admissible_coords(std::shared_ptr<const DiscriminantForm> disc, const Rat& bound);

// Class key as seen from inside a lattice: the order functional reads
// c(k * lstar, k^2 norm / (2 div^2)) for k >= 1.
struct OrderKey {
    Int norm;
    Int div;
    DiscElement lstar;

    bool operator<(const OrderKey& o) const {
        if (norm != o.norm) return norm > o.norm;
        if (div != o.div) return div < o.div;
        return lstar < o.lstar;
    }
    bool operator==(const OrderKey& o) const { return norm == o.norm && div == o.div && lstar == o.lstar; }
};

// Row vector of the order functional over the coordinates.
VecQ order_functional(const AdmissibleCoords& coords, const OrderKey& key);

struct SolveTarget {
    OrderKey key;
    Rat value;
};

struct SolveReport {
    bool feasible = false;
    ModularInput solution;
    std::string infeasible_detail;  // rows of the inconsistent subsystem
};

// Exact solve for a principal part achieving the prescribed order values on
// the target keys and zero on every other key in `all_keys`. Unknowns with
// shallow poles are preferred (fixed pivot order); free variables are zero.
SolveReport solve_principal_part(const AdmissibleCoords& coords, const std::vector<SolveTarget>& targets,
                                 const std::vector<OrderKey>& all_keys);

}  // namespace bgx
