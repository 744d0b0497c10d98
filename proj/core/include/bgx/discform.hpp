#pragma once

#include <bgx/lattice.hpp>

#include <optional>
#include <vector>

namespace bgx {

// Element of A_L = L^dual / L in terms of the invariant-factor generators;
// residues are reduced mod the cyclic orders.
struct DiscElement {
    std::vector<Int> r;

    bool operator==(const DiscElement& o) const { return r == o.r; }
    bool operator!=(const DiscElement& o) const { return !(*this == o); }
    bool operator<(const DiscElement& o) const { return r < o.r; }
    bool is_zero() const {
        for (const auto& x : r)
            if (x != 0) return false;
        return true;
    }
};

// Discriminant group A_L with its Q/2Z quadratic form and Q/Z pairing.
// Generators are the nontrivial invariant factors of the Gram matrix;
// generator_lifts holds rational coordinates (in the basis of L) of dual
// vectors projecting onto the generators.
class DiscriminantForm {
  public:
    DiscriminantForm() = default;
    explicit DiscriminantForm(const Lattice& l);

    const std::vector<Int>& orders() const { return orders_; }
    int ngens() const { return static_cast<int>(orders_.size()); }
    Int order() const;
    const MatQ& generator_lifts() const { return lifts_; }
    const Lattice& lattice() const { return lattice_; }

    DiscElement zero() const { return DiscElement{std::vector<Int>(orders_.size(), Int(0))}; }
    DiscElement reduce(std::vector<Int> residues) const;
    DiscElement add(const DiscElement& a, const DiscElement& b) const;
    DiscElement neg(const DiscElement& a) const;
    DiscElement smul(const Int& k, const DiscElement& a) const;

    // Rational coordinate vector (basis of L) of the canonical lift.
    VecQ lift(const DiscElement& a) const;

    // Class of a dual vector (rational coordinates, integral pairings with L).
    DiscElement element_of(const VecQ& dual_vector) const;
    bool is_dual_vector(const VecQ& v) const;

    // q : A -> Q/2Z, value in [0,2); b : A x A -> Q/Z, value in [0,1).
    Rat q_value(const DiscElement& a) const;
    Rat b_value(const DiscElement& a, const DiscElement& b) const;

    // All elements, lexicographic in residues. |A| is small in this artifact.
    std::vector<DiscElement> elements() const;
    // Index of a in the elements() ordering.
    long index_of(const DiscElement& a) const;
    DiscElement element_at(long idx) const;

    // Orbit representatives under x -> -x, lexicographic order.
    std::vector<DiscElement> elements_mod_negation() const;

    // Minimal number of generators (length) of A.
    int min_generators() const { return ngens(); }

    std::string canonical_string() const;

  private:
    Lattice lattice_;
    std::vector<Int> orders_;
    MatQ lifts_;       // rank x ngens
    MatZ u_;           // SNF row transform: residues of v are (u * G v) mod d
    MatQ gram_inv_;
};

// Automorphisms of (A, q) as permutations of the element list.
using DiscPermutation = std::vector<long>;

std::vector<DiscPermutation> disc_form_autos(const DiscriminantForm& a);

DiscPermutation negation_permutation(const DiscriminantForm& a);

bool is_identity_perm(const DiscPermutation& p);
DiscPermutation compose(const DiscPermutation& f, const DiscPermutation& g);  // f after g

}  // namespace bgx
