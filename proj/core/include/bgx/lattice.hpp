#pragma once

#include <bgx/normform.hpp>

#include <string>
#include <utility>

namespace bgx {

// Even integral lattice with a fixed basis; the Gram matrix is the whole
// state. Quadratic form convention: Q(x) = (x,x) = x^T G x.
class Lattice {
  public:
    Lattice() = default;

    // Validates: square, symmetric, nondegenerate, even diagonal.
    static Lattice make(MatZ gram, std::string name = "");

    const MatZ& gram() const { return gram_; }
    int rank() const { return gram_.rows(); }
    std::pair<int, int> signature() const { return {n_plus_, n_minus_}; }
    bool even() const { return even_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    Int det() const { return det_; }
    Int disc_order() const { return det_ < 0 ? -det_ : det_; }

    Int pair(const VecZ& x, const VecZ& y) const { return pair_z(gram_, x, y); }
    Int norm(const VecZ& x) const { return pair(x, x); }
    Rat pair(const VecQ& x, const VecQ& y) const { return pair_q(gram_, x, y); }
    Rat norm(const VecQ& x) const { return pair(x, x); }

    // Positive generator of (l, L); zero vector rejected.
    Int divisor(const VecZ& l) const;

    bool is_primitive(const VecZ& l) const;

    // Gram of the sublattice spanned by the columns of the embedding matrix.
    Lattice sublattice_gram(const MatZ& basis, const std::string& name = "") const;

    bool positive_definite() const { return n_minus_ == 0 && n_plus_ == rank(); }
    bool negative_definite() const { return n_plus_ == 0 && n_minus_ == rank(); }

    // L(-1): same basis, negated form.
    Lattice twist() const;

    std::string canonical_string() const;
    std::string content_hash() const { return hash_hex(canonical_string()); }

  private:
    MatZ gram_;
    int n_plus_ = 0, n_minus_ = 0;
    bool even_ = true;
    Int det_ = 1;
    std::string name_;
};

Lattice direct_sum(const Lattice& a, const Lattice& b);

// Standard small lattices.
Lattice hyperbolic_plane();              // U
Lattice rank_one(const Int& m);          // <m>, m even
Lattice root_a1();                       // A1 = <-2>
Lattice two_u_plus(const Lattice& k);    // 2U ⊕ K

// Signature of a symmetric integer matrix by exact congruent diagonalization.
std::pair<int, int> exact_signature(const MatZ& gram);

}  // namespace bgx
