#pragma once

#include <bgx/qseries.hpp>
#include <bgx/sublattice.hpp>

#include <map>
#include <memory>

namespace bgx {

// The principal-part model of a weakly holomorphic input form: finitely many
// coefficients c(lambda, n) with n < 0, plus c(0,0). Entries must satisfy
// c(lambda, n) = c(-lambda, n) and n = q(lambda)/2 mod 1.
class ModularInput {
  public:
    using Key = std::pair<std::vector<Int>, Rat>;

    ModularInput() = default;
    ModularInput(std::shared_ptr<const DiscriminantForm> disc, std::map<Key, Rat> pp, Rat c00);

    static ModularInput zero(std::shared_ptr<const DiscriminantForm> disc) {
        return ModularInput(std::move(disc), {}, Rat(0));
    }

    const DiscriminantForm& disc() const { return *disc_; }
    std::shared_ptr<const DiscriminantForm> disc_ptr() const { return disc_; }
    const Lattice& lattice() const { return disc_->lattice(); }
    const std::map<Key, Rat>& pp() const { return pp_; }
    const Rat& c00() const { return c00_; }

    Rat coeff(const DiscElement& e, const Rat& n) const {
        auto it = pp_.find({e.r, n});
        return it == pp_.end() ? Rat(0) : it->second;
    }

    // Max over pp of -n; zero for empty pp.
    Rat pole_depth() const;

    bool is_zero() const { return pp_.empty() && c00_ == 0; }

    ModularInput scaled(const Rat& s) const;
    ModularInput plus(const ModularInput& o, const Rat& co = Rat(1)) const;

    // Action of a discriminant-form permutation (entry relabeling).
    ModularInput permuted(const DiscPermutation& perm) const;

    std::string canonical_string() const;

  private:
    std::shared_ptr<const DiscriminantForm> disc_;
    std::map<Key, Rat> pp_;
    Rat c00_ = 0;
};

// Order of the lifted form along the divisor of a primitive negative vector:
// sum over alpha > 0 with alpha*l dual of c(alpha*l mod L, alpha^2 (l,l)/2).
Rat nutilde(const ModularInput& f, const VecZ& l);

// Same sum expressed through the class key (norm t, divisor d, l* = l/d mod L):
// reads c(k * lstar, k^2 t / (2 d^2)) for k >= 1.
Rat nutilde_key(const ModularInput& f, const Int& t, const Int& d, const DiscElement& lstar);

// Quasi-pullback to the primitive sublattice spanned by sub_basis (any
// corank >= 1 with negative definite complement): contraction of the lifted
// form with the theta series of the complement twist. theta_trunc must cover
// the pole depth, otherwise the output would be uncertified (error).
ModularInput quasi_pullback(const ModularInput& f, const MatZ& sub_basis, const Rat& theta_trunc,
                            std::shared_ptr<const DiscriminantForm> target_disc = nullptr, int jobs = 1);

// Finite-index lift to A_M for M = L' ⊕ K ⊂ L described by glue data: the
// component at mu in A_M is f at the image of mu when mu lies in L^dual/M,
// else zero. Principal part plus the c00 slot, as a graded series.
GradedQSeries up_arrow(const ModularInput& f, const GlueData& g);

}  // namespace bgx
