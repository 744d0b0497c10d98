#include <bgx/shortvec.hpp>

#include <algorithm>

namespace bgx {

namespace {

// Exact LDL^T of a positive definite rational matrix: A = R^T D R with R unit
// upper triangular. Q(x) = sum_i D_i (x_i + sum_{j>i} R_ij x_j)^2.
struct Ldl {
    MatQ r;
    VecQ d;
};

Ldl ldl(const MatZ& gram) {
    int n = gram.rows();
    MatQ a = to_rational(gram);
    Ldl out{MatQ::identity(n), VecQ(n)};
    for (int i = 0; i < n; ++i) {
        if (a(i, i) <= 0) fail(errc::invalid_input, "short vectors need a positive definite form");
        out.d[i] = a(i, i);
        for (int j = i + 1; j < n; ++j) out.r(i, j) = a(i, j) / a(i, i);
        for (int k = i + 1; k < n; ++k)
            for (int l = i + 1; l < n; ++l) a(k, l) -= a(i, k) * a(i, l) / a(i, i);
    }
    return out;
}

}  // namespace

void enumerate_coset(const MatZ& gram, const VecQ& shift, const Rat& bound, bool include_zero,
                     const std::function<void(const ShortVectorEntry&)>& emit) {
    int n = gram.rows();
    if (bound < 0) return;
    Ldl f = ldl(gram);
    VecQ x(n, Rat(0));        // chosen coset coordinates, x_i = shift_i + integer
    VecQ partial(n + 1, Rat(0));  // accumulated norm from levels > i

    // Depth-first from coordinate n-1 down to 0.
    std::function<void(int)> rec = [&](int i) {
        if (i < 0) {
            Rat norm = partial[0];
            bool zero = true;
            for (const auto& c : x)
                if (c != 0) zero = false;
            if (zero && !include_zero) return;
            emit(ShortVectorEntry{x, norm});
            return;
        }
        // Center c_i = sum_{j>i} R_ij x_j; level term D_i (x_i + c_i)^2.
        Rat c = 0;
        for (int j = i + 1; j < n; ++j)
            if (f.r(i, j) != 0 && x[j] != 0) c += f.r(i, j) * x[j];
        Rat budget = bound - partial[i + 1];
        if (budget < 0) return;
        // x_i = shift_i + t, t integer; need D_i (shift_i + t + c)^2 <= budget.
        Rat s = shift[i] + c;
        Rat half_width_sq = budget / f.d[i];
        Int w = isqrt_floor(half_width_sq);
        // t in [ceil(-w' - s), floor(w' - s)] with w' = sqrt(half_width_sq);
        // start from the integer-sqrt hint and fix up exactly.
        Int lo = rat_ceil(Rat(-w - 1) - s);
        Int hi = rat_floor(Rat(w + 1) - s);
        auto fits = [&](const Int& t) {
            Rat v = s + Rat(t);
            return v * v * f.d[i] <= budget;
        };
        while (lo <= hi && !fits(lo)) ++lo;
        while (hi >= lo && !fits(hi)) --hi;
        for (Int t = lo; t <= hi; ++t) {
            Rat v = s + Rat(t);
            x[i] = shift[i] + Rat(t);
            partial[i] = partial[i + 1] + f.d[i] * v * v;
            rec(i - 1);
        }
        x[i] = shift[i];
    };
    rec(n - 1);
}

std::vector<ShortVectorEntry> short_vectors(const Lattice& l, const Rat& bound) {
    if (!l.positive_definite()) fail(errc::invalid_input, "short_vectors: lattice not positive definite");
    std::vector<ShortVectorEntry> out;
    VecQ shift(l.rank(), Rat(0));
    enumerate_coset(l.gram(), shift, bound, false, [&](const ShortVectorEntry& e) { out.push_back(e); });
    return out;
}

std::vector<ShortVectorEntry> short_vectors_coset(const Lattice& l, const VecQ& shift, const Rat& bound,
                                                  bool include_zero) {
    if (!l.positive_definite()) fail(errc::invalid_input, "short_vectors: lattice not positive definite");
    std::vector<ShortVectorEntry> out;
    enumerate_coset(l.gram(), shift, bound, include_zero, [&](const ShortVectorEntry& e) { out.push_back(e); });
    return out;
}

}  // namespace bgx
