#include <bgx/sublattice.hpp>

namespace bgx {

Sublattice orth_complement(const Lattice& l, const MatZ& s_columns) {
    if (s_columns.cols() == 0) return Sublattice{MatZ::identity(l.rank())};
    if (s_columns.rows() != l.rank()) fail(errc::invalid_input, "orth_complement: vector size mismatch");
    // Kernel of the pairing matrix S^T G.
    MatZ pairing(s_columns.cols(), l.rank());
    for (int i = 0; i < s_columns.cols(); ++i)
        for (int j = 0; j < l.rank(); ++j) {
            Int s = 0;
            for (int k = 0; k < l.rank(); ++k) s += s_columns(k, i) * l.gram()(k, j);
            pairing(i, j) = s;
        }
    return Sublattice{integer_kernel(pairing)};
}

Sublattice saturation(const Lattice& l, const MatZ& s_columns) {
    if (s_columns.rows() != l.rank()) fail(errc::invalid_input, "saturation: vector size mismatch");
    return Sublattice{saturate_columns(s_columns)};
}

GlueData glue(const Lattice& l, const MatZ& lp_basis, const MatZ& k_basis) {
    int n = l.rank();
    if (lp_basis.cols() + k_basis.cols() != n)
        fail(errc::invalid_input, "glue: ranks do not add up to the ambient rank");
    for (int i = 0; i < lp_basis.cols(); ++i)
        for (int j = 0; j < k_basis.cols(); ++j)
            if (pair_z(l.gram(), lp_basis.col(i), k_basis.col(j)) != 0)
                fail(errc::invalid_input, "glue: summands not orthogonal");
    MatZ m(n, n);
    for (int j = 0; j < lp_basis.cols(); ++j) m.set_col(j, lp_basis.col(j));
    for (int j = 0; j < k_basis.cols(); ++j) m.set_col(lp_basis.cols() + j, k_basis.col(j));
    Int d = det(m);
    if (d == 0) fail(errc::invalid_input, "glue: not finite index");

    GlueData g;
    g.lp_basis = lp_basis;
    g.k_basis = k_basis;
    g.index = d < 0 ? -d : d;
    g.disc_lp = DiscriminantForm(l.sublattice_gram(lp_basis));
    g.disc_k = DiscriminantForm(l.sublattice_gram(k_basis));
    g.disc_l = DiscriminantForm(l);

    // Orthogonal projections express x in M^dual = L'^dual ⊕ K^dual.
    const Lattice lp = g.disc_lp.lattice();
    const Lattice lk = g.disc_k.lattice();
    MatQ lp_gram_inv = inverse(lp.gram());
    MatQ k_gram_inv = inverse(lk.gram());

    auto project = [&](const VecQ& x_ambient, const MatZ& basis, const MatQ& gram_inv) {
        // Coordinates of the projection in the sublattice basis:
        // gram_inv * (basis^T G x).
        int r = basis.cols();
        VecQ t(r, Rat(0));
        for (int i = 0; i < r; ++i) {
            Rat s = 0;
            for (int a = 0; a < basis.rows(); ++a)
                for (int b = 0; b < basis.rows(); ++b)
                    if (basis(a, i) != 0 && x_ambient[b] != 0) s += Rat(basis(a, i) * l.gram()(a, b)) * x_ambient[b];
            t[i] = s;
        }
        VecQ out(r, Rat(0));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) out[i] += gram_inv(i, j) * t[j];
        return out;
    };

    // Generators of L/M from the SNF of the basis-change matrix: L = Z^n,
    // M = m Z^n, quotient generated by u_inv columns scaled appropriately.
    SmithForm s = smith_form(m);
    for (int i = 0; i < n; ++i) {
        if (s.d(i, i) == 1) continue;
        VecQ x(n);
        for (int j = 0; j < n; ++j) x[j] = Rat(s.u_inv(j, i));
        VecQ a = project(x, lp_basis, lp_gram_inv);
        VecQ b = project(x, k_basis, k_gram_inv);
        g.glue_gens.emplace_back(g.disc_lp.element_of(a), g.disc_k.element_of(b));
    }

    // Coset lift table: (a, b) supported iff its lift pairs integrally with
    // all of L, i.e. with the L/M generators; image is the class in A_L.
    auto lp_elems = g.disc_lp.elements();
    auto k_elems = g.disc_k.elements();
    long nk = static_cast<long>(k_elems.size());
    g.coset_lift.assign(lp_elems.size() * k_elems.size(), std::nullopt);
    MatQ minv = inverse(to_rational(m));
    for (size_t ia = 0; ia < lp_elems.size(); ++ia) {
        VecQ la = g.disc_lp.lift(lp_elems[ia]);
        for (size_t ib = 0; ib < k_elems.size(); ++ib) {
            VecQ lb = g.disc_k.lift(k_elems[ib]);
            // Ambient coordinates of the lift.
            VecQ amb(n, Rat(0));
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < lp_basis.cols(); ++j) amb[i] += Rat(lp_basis(i, j)) * la[j];
                for (int j = 0; j < k_basis.cols(); ++j) amb[i] += Rat(k_basis(i, j)) * lb[j];
            }
            if (!g.disc_l.is_dual_vector(amb)) continue;
            g.coset_lift[ia * nk + ib] = g.disc_l.element_of(amb);
        }
    }
    return g;
}

GlueData glue_with_complement(const Lattice& l, const MatZ& lp_basis) {
    // Complement via pairing kernel against the columns of lp_basis.
    Sublattice k = orth_complement(l, lp_basis);
    return glue(l, lp_basis, k.basis);
}

}  // namespace bgx
