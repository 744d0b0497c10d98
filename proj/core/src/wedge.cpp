#include <bgx/wedge.hpp>

#include <bgx/normform.hpp>

#include <functional>

namespace bgx {

std::vector<std::vector<int>> wedge_tuples(int dim, int q) {
    std::vector<std::vector<int>> out;
    if (q < 0 || q > dim) return out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == q) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < dim; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

namespace {

Rat q_minor(const MatQ& a, const std::vector<int>& rows, const std::vector<int>& cols) {
    int q = static_cast<int>(rows.size());
    MatQ m(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) m(i, j) = a(rows[i], cols[j]);
    // Small exact determinant by Gaussian elimination.
    Rat det = 1;
    for (int c = 0; c < q; ++c) {
        int p = -1;
        for (int r = c; r < q; ++r)
            if (m(r, c) != 0) {
                p = r;
                break;
            }
        if (p < 0) return Rat(0);
        if (p != c) {
            m.swap_rows(p, c);
            det = -det;
        }
        det *= m(c, c);
        for (int r = c + 1; r < q; ++r) {
            if (m(r, c) == 0) continue;
            Rat f = m(r, c) / m(c, c);
            for (int j = c; j < q; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

MatQ canonical_columns(MatQ m) {
    MatQ t = m.transpose();
    rref(t);
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

MatQ wedge_matrix(const MatQ& action, const std::vector<std::vector<int>>& tuples) {
    int n = static_cast<int>(tuples.size());
    MatQ out(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(i, j) = q_minor(action, tuples[i], tuples[j]);
    return out;
}

MatQ invariant_wedge_basis(const std::vector<MatQ>& actions, int dim, int q) {
    auto tups = wedge_tuples(dim, q);
    int n = static_cast<int>(tups.size());
    if (actions.empty()) return MatQ::identity(n);
    MatQ rey(n, n);
    for (const auto& a : actions) rey = rey + wedge_matrix(a, tups);
    MatQ scaled = rey;
    for (int i = 0; i < n; ++i) scaled(i, i) -= Rat(static_cast<long>(actions.size()));
    return canonical_columns(kernel(scaled));
}

std::vector<MatQ> basis_actions(const TruncatedSpace& space, const MatQ& term_basis,
                                const std::vector<DiscPermutation>& group) {
    const auto& disc = *space.coords.disc;
    long n = space.coords.dim();
    std::vector<MatQ> out;
    for (const auto& g : group) {
        // Coordinate-space action.
        MatQ a(static_cast<int>(n), static_cast<int>(n));
        for (long j = 0; j < n; ++j) {
            const auto& [e, expo] = space.coords.coords[j];
            DiscElement img = disc.element_at(g[disc.index_of(e)]);
            long i = space.coords.find(img, expo);
            if (i < 0) fail(errc::invalid_input, "group action leaves the coordinate window");
            a(static_cast<int>(i), static_cast<int>(j)) = 1;
        }
        // Restrict to the term basis: solve term_basis * y = a * term_basis.
        MatQ img = a * term_basis;
        MatQ m(term_basis.rows(), term_basis.cols() + img.cols());
        for (int i = 0; i < term_basis.rows(); ++i) {
            for (int j = 0; j < term_basis.cols(); ++j) m(i, j) = term_basis(i, j);
            for (int j = 0; j < img.cols(); ++j) m(i, term_basis.cols() + j) = img(i, j);
        }
        std::vector<int> order;
        for (int j = 0; j < term_basis.cols(); ++j) order.push_back(j);
        auto pivots = rref(m, &order);
        for (int i = static_cast<int>(pivots.size()); i < m.rows(); ++i)
            for (int j = 0; j < img.cols(); ++j)
                if (m(i, term_basis.cols() + j) != 0)
                    fail(errc::invalid_input, "group action does not preserve the term space");
        MatQ act(term_basis.cols(), img.cols());
        for (size_t p = 0; p < pivots.size(); ++p)
            for (int j = 0; j < img.cols(); ++j) act(pivots[p], j) = m(static_cast<int>(p), term_basis.cols() + j);
        out.push_back(std::move(act));
    }
    return out;
}

}  // namespace bgx
