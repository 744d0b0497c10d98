#include <bgx/obstruction.hpp>

#include <bgx/normform.hpp>

namespace bgx {

bool ObstructionBasis::matches(const DiscriminantForm& d) const {
    if (orders != d.orders()) return false;
    auto elems = d.elements();
    if (q_values.size() != elems.size()) return false;
    for (size_t i = 0; i < elems.size(); ++i)
        if (q_values[i] != d.q_value(elems[i])) return false;
    return true;
}

std::vector<Rat> obstruction_pair(const ModularInput& f, const ObstructionBasis& ob) {
    if (!ob.matches(f.disc())) fail(errc::invalid_input, "obstruction data does not match the lattice");
    Rat depth = f.pole_depth();
    std::vector<Rat> out;
    for (const auto& fn : ob.functionals) {
        if (fn.coverage < depth) fail(errc::invalid_input, "obstruction functional table shorter than the pole depth");
        Rat v = 0;
        for (const auto& [key, c] : f.pp()) {
            auto it = fn.table.find({key.first, -key.second});
            if (it != fn.table.end()) v += c * it->second;
        }
        if (fn.is_c00) v += f.c00();
        out.push_back(v);
    }
    return out;
}

namespace {

// Canonical echelon column basis of the span of the columns of m.
MatQ canonical_columns(MatQ m) {
    MatQ t = m.transpose();
    rref(t);
    // Drop zero rows.
    std::vector<int> keep;
    for (int i = 0; i < t.rows(); ++i) {
        bool nz = false;
        for (int j = 0; j < t.cols(); ++j)
            if (t(i, j) != 0) nz = true;
        if (nz) keep.push_back(i);
    }
    MatQ out(m.rows(), static_cast<int>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j)
        for (int i = 0; i < m.rows(); ++i) out(i, static_cast<int>(j)) = t(keep[j], i);
    return out;
}

}  // namespace

TruncatedSpace formal_space(std::shared_ptr<const DiscriminantForm> disc, const Rat& bound) {
    TruncatedSpace s;
    s.coords = admissible_coords(std::move(disc), bound);
    s.basis = MatQ::identity(static_cast<int>(s.coords.dim()));
    s.mode = SpaceMode::Formal;
    return s;
}

TruncatedSpace realizable_space(std::shared_ptr<const DiscriminantForm> disc, const Rat& bound,
                                const ObstructionBasis& ob) {
    TruncatedSpace s;
    s.coords = admissible_coords(disc, bound);
    if (!ob.matches(*disc)) fail(errc::invalid_input, "obstruction data does not match the lattice");
    bool has_c00 = false;
    std::vector<const ObstructionFunctional*> fns;
    for (const auto& fn : ob.functionals) {
        if (fn.coverage < bound)
            fail(errc::invalid_input, "obstruction functional coverage below the pole bound");
        fns.push_back(&fn);
        if (fn.is_c00) has_c00 = true;
    }
    long n = s.coords.dim();
    MatQ m(static_cast<int>(fns.size()), static_cast<int>(n));
    for (size_t i = 0; i < fns.size(); ++i) {
        for (long j = 0; j < n; ++j) {
            const auto& [e, expo] = s.coords.coords[j];
            // The coordinate sets both c(e, n) and c(-e, n).
            Rat v = 0;
            auto it = fns[i]->table.find({e.r, -expo});
            if (it != fns[i]->table.end()) v += it->second;
            DiscElement me = disc->neg(e);
            if (me.r != e.r) {
                auto it2 = fns[i]->table.find({me.r, -expo});
                if (it2 != fns[i]->table.end()) v += it2->second;
            }
            m(static_cast<int>(i), static_cast<int>(j)) = v;
        }
    }
    s.basis = canonical_columns(kernel(m));
    s.mode = has_c00 ? SpaceMode::RealizableC00 : SpaceMode::Realizable;
    return s;
}

VecQ TruncatedSpace::coordinates(const ModularInput& f) const {
    VecQ x = coords.from_input(f);
    if (basis.cols() == static_cast<int>(coords.dim()) && mode == SpaceMode::Formal) return x;
    // Solve basis * y = x.
    MatQ m(basis.rows(), basis.cols() + 1);
    for (int i = 0; i < basis.rows(); ++i) {
        for (int j = 0; j < basis.cols(); ++j) m(i, j) = basis(i, j);
        m(i, basis.cols()) = x[i];
    }
    std::vector<int> order;
    for (int j = 0; j < basis.cols(); ++j) order.push_back(j);
    auto pivots = rref(m, &order);
    for (int i = static_cast<int>(pivots.size()); i < m.rows(); ++i)
        if (m(i, basis.cols()) != 0)
            fail(errc::invalid_input, "input lies outside the modeled subspace");
    VecQ y(basis.cols(), Rat(0));
    for (size_t p = 0; p < pivots.size(); ++p) y[pivots[p]] = m(static_cast<int>(p), basis.cols());
    return y;
}

MatQ invariant_subspace(const TruncatedSpace& space, const std::vector<DiscPermutation>& group) {
    long n = space.coords.dim();
    const auto& disc = *space.coords.disc;
    // Action of each group element on the coordinate space.
    std::vector<MatQ> acts;
    for (const auto& g : group) {
        MatQ a(static_cast<int>(n), static_cast<int>(n));
        for (long j = 0; j < n; ++j) {
            const auto& [e, expo] = space.coords.coords[j];
            DiscElement img = disc.element_at(g[disc.index_of(e)]);
            long i = space.coords.find(img, expo);
            if (i < 0) fail(errc::invalid_input, "group action leaves the coordinate window");
            a(static_cast<int>(i), static_cast<int>(j)) = 1;
        }
        acts.push_back(std::move(a));
    }
    // Reynolds on the ambient coordinates, then intersect with the space.
    MatQ rey(static_cast<int>(n), static_cast<int>(n));
    for (const auto& a : acts) rey = rey + a;
    // Invariants = kernel of (rey - |G| id) intersected with span(basis):
    // solve for y with (rey - |G|) * basis * y = 0.
    MatQ scaled = rey;
    for (long i = 0; i < n; ++i) scaled(static_cast<int>(i), static_cast<int>(i)) -= Rat(static_cast<long>(acts.size()));
    MatQ prod = scaled * space.basis;
    MatQ y = kernel(prod);
    MatQ emb = space.basis * y;
    return canonical_columns(emb);
}

}  // namespace bgx
