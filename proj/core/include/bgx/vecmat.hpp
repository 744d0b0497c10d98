#pragma once

#include <bgx/numbers.hpp>

#include <initializer_list>
#include <vector>

namespace bgx {

// Dense matrices with exact entries. Sizes here are tiny (lattice ranks <= 8,
// basis dimensions in the dozens), so no attempt at sparsity or blocking.
template <typename T>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
    Mat(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = static_cast<int>(init.size());
        cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
        a_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols_) fail(errc::invalid_input, "ragged matrix literal");
            for (const auto& x : row) a_.push_back(x);
        }
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<T> col(int j) const {
        std::vector<T> v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(int j, const std::vector<T>& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    void swap_rows(int i, int j) {
        for (int k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(int i, int j) {
        for (int k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }

  private:
    int rows_, cols_;
    std::vector<T> a_;
};

using MatZ = Mat<Int>;
using MatQ = Mat<Rat>;
using VecZ = std::vector<Int>;
using VecQ = std::vector<Rat>;

template <typename T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows()) fail(errc::invalid_input, "matrix shape mismatch");
    Mat<T> c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

template <typename T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

template <typename T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

template <typename T>
std::vector<T> operator*(const Mat<T>& a, const std::vector<T>& v) {
    if (a.cols() != static_cast<int>(v.size())) fail(errc::invalid_input, "matrix/vector shape mismatch");
    std::vector<T> w(a.rows(), T(0));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0) w[i] += a(i, j) * v[j];
    return w;
}

inline MatQ to_rational(const MatZ& a) {
    MatQ b(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) b(i, j) = Rat(a(i, j));
    return b;
}

inline VecQ to_rational(const VecZ& v) {
    VecQ w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = Rat(v[i]);
    return w;
}

// Bareiss fraction-free determinant.
inline Int det(MatZ a) {
    if (a.rows() != a.cols()) fail(errc::invalid_input, "det of non-square");
    int n = a.rows();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// Exact inverse over Q via Gauss-Jordan.
inline MatQ inverse(const MatQ& m) {
    if (m.rows() != m.cols()) fail(errc::invalid_input, "inverse of non-square");
    int n = m.rows();
    MatQ a = m, inv = MatQ::identity(n);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (a(r, c) != 0) {
                p = r;
                break;
            }
        if (p < 0) fail(errc::invalid_input, "singular matrix");
        a.swap_rows(c, p);
        inv.swap_rows(c, p);
        Rat piv = a(c, c);
        for (int j = 0; j < n; ++j) {
            a(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0) continue;
            Rat f = a(r, c);
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

inline MatQ inverse(const MatZ& m) { return inverse(to_rational(m)); }

inline VecQ operator*(const MatQ& a, const VecZ& v) { return a * to_rational(v); }

template <typename T>
std::vector<T> operator+(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

template <typename T>
std::vector<T> operator-(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
    T s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Pairing x^T G y.
inline Int pair_z(const MatZ& gram, const VecZ& x, const VecZ& y) {
    Int s = 0;
    for (int i = 0; i < gram.rows(); ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < gram.cols(); ++j)
            if (y[j] != 0) s += x[i] * gram(i, j) * y[j];
    }
    return s;
}

inline Rat pair_q(const MatZ& gram, const VecQ& x, const VecQ& y) {
    Rat s = 0;
    for (int i = 0; i < gram.rows(); ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < gram.cols(); ++j)
            if (y[j] != 0) s += x[i] * Rat(gram(i, j)) * y[j];
    }
    return s;
}

}  // namespace bgx
