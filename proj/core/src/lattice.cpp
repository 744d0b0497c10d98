#include <bgx/lattice.hpp>

#include <sstream>

namespace bgx {

std::pair<int, int> exact_signature(const MatZ& gram) {
    // Congruent diagonalization over Q. Zero diagonal with nonzero row is
    // fixed by a row/column addition first.
    MatQ a = to_rational(gram);
    int n = a.rows();
    int pos = 0, neg = 0;
    for (int k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            int p = -1;
            for (int j = k + 1; j < n; ++j)
                if (a(k, j) != 0) {
                    p = j;
                    break;
                }
            if (p < 0) continue;  // zero row: contributes nothing (degenerate)
            // row_k += c*row_p / col_k += c*col_p; c in {1,2} always makes
            // the new diagonal 2c*a(k,p) + c^2*a(p,p) nonzero.
            for (int c = 1; c <= 2 && a(k, k) == 0; ++c) {
                MatQ b = a;
                for (int j = 0; j < n; ++j) b(k, j) = a(k, j) + Rat(c) * a(p, j);
                for (int i = 0; i < n; ++i) b(i, k) = b(i, k) + Rat(c) * b(i, p);
                if (b(k, k) != 0) a = b;
            }
            if (a(k, k) == 0) fail(errc::invalid_input, "signature pivot failure");
        }
        if (a(k, k) == 0) continue;
        if (a(k, k) > 0)
            ++pos;
        else
            ++neg;
        for (int i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = a(i, k) / a(k, k);
            for (int j = 0; j < n; ++j) a(i, j) -= f * a(k, j);
            for (int j = 0; j < n; ++j) a(j, i) -= f * a(j, k);
        }
    }
    return {pos, neg};
}

Lattice Lattice::make(MatZ gram, std::string name) {
    if (gram.rows() != gram.cols()) fail(errc::invalid_input, "gram matrix not square");
    for (int i = 0; i < gram.rows(); ++i)
        for (int j = 0; j < i; ++j)
            if (gram(i, j) != gram(j, i)) fail(errc::invalid_input, "gram matrix not symmetric");
    for (int i = 0; i < gram.rows(); ++i)
        if (gram(i, i) % 2 != 0) fail(errc::invalid_input, "odd lattice: diagonal entry " + to_string(gram(i, i)));
    Lattice l;
    l.det_ = bgx::det(gram);
    if (l.det_ == 0 && gram.rows() > 0) fail(errc::invalid_input, "degenerate gram matrix");
    auto sig = exact_signature(gram);
    l.n_plus_ = sig.first;
    l.n_minus_ = sig.second;
    l.even_ = true;
    l.gram_ = std::move(gram);
    l.name_ = std::move(name);
    return l;
}

Int Lattice::divisor(const VecZ& l) const {
    VecZ pairings(rank());
    bool zero = true;
    for (const auto& x : l)
        if (x != 0) zero = false;
    if (zero) fail(errc::invalid_input, "divisor of zero vector");
    for (int i = 0; i < rank(); ++i) {
        Int s = 0;
        for (int j = 0; j < rank(); ++j) s += gram_(i, j) * l[j];
        pairings[i] = s;
    }
    return gcd(pairings);
}

bool Lattice::is_primitive(const VecZ& l) const {
    Int g = gcd(l);
    return g == 1;
}

Lattice Lattice::sublattice_gram(const MatZ& basis, const std::string& name) const {
    MatZ g(basis.cols(), basis.cols());
    for (int i = 0; i < basis.cols(); ++i)
        for (int j = 0; j < basis.cols(); ++j) g(i, j) = pair_z(gram_, basis.col(i), basis.col(j));
    return Lattice::make(std::move(g), name);
}

Lattice Lattice::twist() const {
    MatZ g = gram_;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) g(i, j) = -g(i, j);
    return Lattice::make(std::move(g), name_.empty() ? "" : name_ + "(-1)");
}

std::string Lattice::canonical_string() const {
    std::ostringstream os;
    os << "lattice " << rank() << "\n";
    for (int i = 0; i < rank(); ++i) {
        for (int j = 0; j < rank(); ++j) {
            if (j) os << ' ';
            os << gram_(i, j).get_str();
        }
        os << '\n';
    }
    return os.str();
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
    MatZ g(a.rank() + b.rank(), a.rank() + b.rank());
    for (int i = 0; i < a.rank(); ++i)
        for (int j = 0; j < a.rank(); ++j) g(i, j) = a.gram()(i, j);
    for (int i = 0; i < b.rank(); ++i)
        for (int j = 0; j < b.rank(); ++j) g(a.rank() + i, a.rank() + j) = b.gram()(i, j);
    std::string name;
    if (!a.name().empty() && !b.name().empty()) name = a.name() + "+" + b.name();
    return Lattice::make(std::move(g), name);
}

Lattice hyperbolic_plane() { return Lattice::make(MatZ{{Int(0), Int(1)}, {Int(1), Int(0)}}, "U"); }

Lattice rank_one(const Int& m) {
    return Lattice::make(MatZ{{m}}, "<" + to_string(m) + ">");
}

Lattice root_a1() { return Lattice::make(MatZ{{Int(-2)}}, "A1"); }

Lattice two_u_plus(const Lattice& k) {
    Lattice u2 = direct_sum(hyperbolic_plane(), hyperbolic_plane());
    u2.set_name("2U");
    if (k.rank() == 0) return u2;
    Lattice out = direct_sum(u2, k);
    out.set_name("2U+" + (k.name().empty() ? std::string("K") : k.name()));
    return out;
}

}  // namespace bgx
