#include <bgx/normform.hpp>

namespace bgx {

namespace {

// u, u_inv track row ops on a; v, v_inv track column ops.
struct Worker {
    MatZ a, u, v, u_inv, v_inv;

    explicit Worker(const MatZ& m)
        : a(m),
          u(MatZ::identity(m.rows())),
          v(MatZ::identity(m.cols())),
          u_inv(MatZ::identity(m.rows())),
          v_inv(MatZ::identity(m.cols())) {}

    // row_i += c * row_j  (on a and u); u_inv gets the inverse column op.
    void row_add(int i, int j, const Int& c) {
        for (int k = 0; k < a.cols(); ++k) a(i, k) += c * a(j, k);
        for (int k = 0; k < u.cols(); ++k) u(i, k) += c * u(j, k);
        for (int k = 0; k < u_inv.rows(); ++k) u_inv(k, j) -= c * u_inv(k, i);
    }
    void col_add(int i, int j, const Int& c) {  // col_i += c * col_j
        for (int k = 0; k < a.rows(); ++k) a(k, i) += c * a(k, j);
        for (int k = 0; k < v.rows(); ++k) v(k, i) += c * v(k, j);
        for (int k = 0; k < v_inv.cols(); ++k) v_inv(j, k) -= c * v_inv(i, k);
    }
    void row_swap(int i, int j) {
        a.swap_rows(i, j);
        u.swap_rows(i, j);
        u_inv.swap_cols(i, j);
    }
    void col_swap(int i, int j) {
        a.swap_cols(i, j);
        v.swap_cols(i, j);
        v_inv.swap_rows(i, j);
    }
    void row_negate(int i) {
        for (int k = 0; k < a.cols(); ++k) a(i, k) = -a(i, k);
        for (int k = 0; k < u.cols(); ++k) u(i, k) = -u(i, k);
        for (int k = 0; k < u_inv.rows(); ++k) u_inv(k, i) = -u_inv(k, i);
    }
    void col_negate(int j) {
        for (int k = 0; k < a.rows(); ++k) a(k, j) = -a(k, j);
        for (int k = 0; k < v.rows(); ++k) v(k, j) = -v(k, j);
        for (int k = 0; k < v_inv.cols(); ++k) v_inv(j, k) = -v_inv(j, k);
    }
};

}  // namespace

SmithForm smith_form(const MatZ& m) {
    Worker w(m);
    int rows = m.rows(), cols = m.cols();
    int t = 0;
    int limit = std::min(rows, cols);
    while (t < limit) {
        // Find a nonzero pivot in the remaining block.
        int pi = -1, pj = -1;
        for (int i = t; i < rows && pi < 0; ++i)
            for (int j = t; j < cols; ++j)
                if (w.a(i, j) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi < 0) break;
        w.row_swap(t, pi);
        w.col_swap(t, pj);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (int i = t + 1; i < rows; ++i) {
                if (w.a(i, t) == 0) continue;
                Int q = w.a(i, t) / w.a(t, t);
                w.row_add(i, t, -q);
                if (w.a(i, t) != 0) {
                    w.row_swap(t, i);
                    dirty = true;
                }
            }
            for (int j = t + 1; j < cols; ++j) {
                if (w.a(t, j) == 0) continue;
                Int q = w.a(t, j) / w.a(t, t);
                w.col_add(j, t, -q);
                if (w.a(t, j) != 0) {
                    w.col_swap(t, j);
                    dirty = true;
                }
            }
        }
        ++t;
    }
    // Positive diagonal, then enforce divisibility chain.
    for (int i = 0; i < limit; ++i)
        if (w.a(i, i) < 0) w.row_negate(i);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i + 1 < limit; ++i) {
            const Int &di = w.a(i, i), &dj = w.a(i + 1, i + 1);
            if (di == 0 && dj != 0) {
                w.row_swap(i, i + 1);
                w.col_swap(i, i + 1);
                changed = true;
                continue;
            }
            if (di == 0 || dj == 0) continue;
            if (dj % di == 0) continue;
            // Standard 2x2 trick: fold d_{i+1} into the chain.
            w.col_add(i, i + 1, 1);
            bool dirty = true;
            while (dirty) {
                dirty = false;
                if (w.a(i + 1, i) != 0) {
                    Int q = w.a(i + 1, i) / w.a(i, i);
                    w.row_add(i + 1, i, -q);
                    if (w.a(i + 1, i) != 0) {
                        w.row_swap(i, i + 1);
                        dirty = true;
                    }
                }
                if (w.a(i, i + 1) != 0) {
                    Int q = w.a(i, i + 1) / w.a(i, i);
                    w.col_add(i + 1, i, -q);
                    if (w.a(i, i + 1) != 0) {
                        w.col_swap(i, i + 1);
                        dirty = true;
                    }
                }
            }
            if (w.a(i, i) < 0) w.row_negate(i);
            if (w.a(i + 1, i + 1) < 0) w.row_negate(i + 1);
            changed = true;
        }
    }
    SmithForm s;
    s.d = w.a;
    s.u = w.u;
    s.v = w.v;
    s.u_inv = w.u_inv;
    s.v_inv = w.v_inv;
    for (int i = 0; i < limit; ++i)
        if (s.d(i, i) != 0) ++s.rank;
    return s;
}

HermiteForm hermite_form(const MatZ& m) {
    Worker w(m);
    int rows = m.rows(), cols = m.cols();
    int pivot_col = 0;
    for (int r = 0; r < rows && pivot_col < cols; ++r) {
        // Clear row r to the right of pivot_col by column gcd steps.
        while (true) {
            int nz = -1;
            for (int j = pivot_col + 1; j < cols; ++j)
                if (w.a(r, j) != 0) {
                    nz = j;
                    break;
                }
            if (w.a(r, pivot_col) == 0) {
                if (nz < 0) break;
                w.col_swap(pivot_col, nz);
                continue;
            }
            if (nz < 0) break;
            Int q = w.a(r, nz) / w.a(r, pivot_col);
            w.col_add(nz, pivot_col, -q);
            if (w.a(r, nz) != 0) w.col_swap(pivot_col, nz);
        }
        if (w.a(r, pivot_col) == 0) continue;
        if (w.a(r, pivot_col) < 0) w.col_negate(pivot_col);
        // Reduce earlier pivot columns against this one.
        for (int j = 0; j < pivot_col; ++j) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), w.a(r, j).get_mpz_t(), w.a(r, pivot_col).get_mpz_t());
            if (q != 0) w.col_add(j, pivot_col, -q);
        }
        ++pivot_col;
    }
    HermiteForm h;
    h.h = w.a;
    h.v = w.v;
    h.rank = pivot_col;
    return h;
}

MatZ integer_kernel(const MatZ& a) {
    HermiteForm h = hermite_form(a);
    // Columns of v beyond rank map to zero columns of h.
    MatZ k(a.cols(), a.cols() - h.rank);
    for (int j = h.rank; j < a.cols(); ++j)
        for (int i = 0; i < a.cols(); ++i) k(i, j - h.rank) = h.v(i, j);
    return k;
}

MatZ saturate_columns(const MatZ& b) {
    SmithForm s = smith_form(b);
    // b = u_inv * d * v_inv; rational column span = span of first `rank`
    // columns of u_inv; those columns are a basis of the saturation.
    MatZ out(b.rows(), s.rank);
    for (int j = 0; j < s.rank; ++j)
        for (int i = 0; i < b.rows(); ++i) out(i, j) = s.u_inv(i, j);
    return out;
}

bool span_contains(const MatZ& a, const VecZ& v) {
    // Solve a x = v over Z via Hermite form of a.
    HermiteForm h = hermite_form(a);
    VecZ r = v;
    VecZ coeff(a.cols(), Int(0));
    for (int j = 0; j < h.rank; ++j) {
        int prow = -1;
        for (int i = 0; i < a.rows(); ++i)
            if (h.h(i, j) != 0) {
                prow = i;
                break;
            }
        if (prow < 0) continue;
        if (r[prow] % h.h(prow, j) != 0) return false;
        Int q = r[prow] / h.h(prow, j);
        for (int i = 0; i < a.rows(); ++i) r[i] -= q * h.h(i, j);
    }
    for (const auto& x : r)
        if (x != 0) return false;
    return true;
}

VecQ solve_exact(const MatZ& a, const VecQ& v) {
    MatQ m(a.rows(), a.cols() + 1);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) m(i, j) = Rat(a(i, j));
        m(i, a.cols()) = v[i];
    }
    std::vector<int> order;
    for (int j = 0; j < a.cols(); ++j) order.push_back(j);
    auto pivots = rref(m, &order);
    // After rref the p-th pivot sits in row p; rows past the rank must have
    // zero right-hand side or the system is inconsistent.
    for (int i = static_cast<int>(pivots.size()); i < m.rows(); ++i)
        if (m(i, a.cols()) != 0) fail(errc::infeasible, "inconsistent linear system");
    VecQ x(a.cols(), Rat(0));
    for (size_t p = 0; p < pivots.size(); ++p) x[pivots[p]] = m(static_cast<int>(p), a.cols());
    return x;
}

Int span_index(const MatZ& sub, const MatZ& full) {
    // Write sub = full * C with C integral square; index = |det C|.
    if (sub.cols() != full.cols()) fail(errc::invalid_input, "span_index: rank mismatch");
    MatZ c(full.cols(), sub.cols());
    for (int j = 0; j < sub.cols(); ++j) {
        VecQ rhs(sub.rows());
        for (int i = 0; i < sub.rows(); ++i) rhs[i] = Rat(sub(i, j));
        VecQ x = solve_exact(full, rhs);
        for (int i = 0; i < full.cols(); ++i) {
            if (!is_integer(x[i])) fail(errc::invalid_input, "span_index: not a sublattice");
            c(i, j) = x[i].get_num();
        }
    }
    Int d = bgx::det(c);
    if (d < 0) d = -d;
    if (d == 0) fail(errc::invalid_input, "span_index: infinite index");
    return d;
}

std::vector<int> rref(MatQ& m, const std::vector<int>* col_order) {
    std::vector<int> order;
    if (col_order)
        order = *col_order;
    else
        for (int j = 0; j < m.cols(); ++j) order.push_back(j);
    std::vector<int> pivots;
    int row = 0;
    for (int oc : order) {
        if (row >= m.rows()) break;
        int p = -1;
        for (int r = row; r < m.rows(); ++r)
            if (m(r, oc) != 0) {
                p = r;
                break;
            }
        if (p < 0) continue;
        m.swap_rows(row, p);
        Rat piv = m(row, oc);
        for (int j = 0; j < m.cols(); ++j) m(row, j) /= piv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, oc) == 0) continue;
            Rat f = m(r, oc);
            for (int j = 0; j < m.cols(); ++j) m(r, j) -= f * m(row, j);
        }
        pivots.push_back(oc);
        ++row;
    }
    return pivots;
}

MatQ kernel(const MatQ& m) {
    MatQ r = m;
    auto pivots = rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    MatQ k(m.cols(), static_cast<int>(free_cols.size()));
    for (size_t f = 0; f < free_cols.size(); ++f) {
        int fc = free_cols[f];
        k(fc, static_cast<int>(f)) = 1;
        for (size_t p = 0; p < pivots.size(); ++p) k(pivots[p], static_cast<int>(f)) = -r(static_cast<int>(p), fc);
    }
    return k;
}

int rank(MatQ m) { return static_cast<int>(rref(m).size()); }

}  // namespace bgx
