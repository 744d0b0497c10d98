#pragma once

#include <bgx/vecmat.hpp>

namespace bgx {

// Smith normal form: U * A * V = D with U, V unimodular and
// D diagonal, d_1 | d_2 | ... | d_r, d_i >= 0.
struct SmithForm {
    MatZ d;
    MatZ u;       // rows x rows
    MatZ v;       // cols x cols
    MatZ u_inv;   // maintained alongside u
    MatZ v_inv;
    int rank = 0;
};

SmithForm smith_form(const MatZ& a);

// Column-style Hermite normal form: A * V = H with V unimodular, H lower
// column echelon (pivot columns first, nonnegative pivots, entries to the
// right of a pivot reduced).
struct HermiteForm {
    MatZ h;
    MatZ v;
    int rank = 0;
};

HermiteForm hermite_form(const MatZ& a);

// Basis of the integer kernel {x : A x = 0} as columns; the result is
// saturated (a basis of a primitive sublattice of Z^cols).
MatZ integer_kernel(const MatZ& a);

// Saturation of the column span of B inside Z^rows: basis of (span_Q B) cap Z^rows.
MatZ saturate_columns(const MatZ& b);

// Does the column span of A contain v? (exact rational solve + integrality.)
bool span_contains(const MatZ& a, const VecZ& v);

// Solve A x = v over Q; fails if inconsistent. A must have full column rank.
VecQ solve_exact(const MatZ& a, const VecQ& v);

// Index [span(full) : span(sub)] of a finite-index column-span inclusion.
Int span_index(const MatZ& sub, const MatZ& full);

// RREF over Q, pivoting in the given column order (default: left to right).
// Returns pivot columns; the matrix is reduced in place.
std::vector<int> rref(MatQ& m, const std::vector<int>* col_order = nullptr);

// Kernel basis of a rational matrix (columns of the result).
MatQ kernel(const MatQ& m);

int rank(MatQ m);

}  // namespace bgx
