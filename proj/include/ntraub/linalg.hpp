#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ntraub/errors.hpp"

namespace ntraub {

using Vector = std::vector<double>;

/// Dense row-major matrix, just big enough for the small systems here.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                     static_cast<std::size_t>(j)];
    }
    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                     static_cast<std::size_t>(j)];
    }

    Vector multiply(const Vector& v) const {
        Vector out(static_cast<std::size_t>(rows_), 0.0);
        for (int i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = s;
        }
        return out;
    }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// LU factorization with partial pivoting.  The factorization is kept so a
/// single Jacobian decomposition can serve several right-hand sides.
/// A pivot below 1e-14 times its row scale is treated as singular.
class LuFactorization {
  public:
    explicit LuFactorization(Matrix a) : lu_(std::move(a)) {
        const int n = lu_.rows();
        if (n != lu_.cols()) throw SingularMatrixError("lu: matrix not square");
        perm_.resize(static_cast<std::size_t>(n));
        std::vector<double> row_scale(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s = std::max(s, std::fabs(lu_(i, j)));
            row_scale[static_cast<std::size_t>(i)] = s;
            perm_[static_cast<std::size_t>(i)] = i;
        }
        for (int k = 0; k < n; ++k) {
            int piv = k;
            double best = std::fabs(lu_(k, k));
            for (int i = k + 1; i < n; ++i) {
                const double v = std::fabs(lu_(i, k));
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            const double scale = row_scale[static_cast<std::size_t>(piv)];
            if (best < 1e-14 * (scale > 0.0 ? scale : 1.0)) {
                throw SingularMatrixError("lu: pivot below threshold at column " +
                                          std::to_string(k));
            }
            if (piv != k) {
                for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
                std::swap(perm_[static_cast<std::size_t>(k)],
                          perm_[static_cast<std::size_t>(piv)]);
                std::swap(row_scale[static_cast<std::size_t>(k)],
                          row_scale[static_cast<std::size_t>(piv)]);
            }
            const double inv_pivot = 1.0 / lu_(k, k);
            for (int i = k + 1; i < n; ++i) {
                const double m = lu_(i, k) * inv_pivot;
                lu_(i, k) = m;
                if (m != 0.0) {
                    for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
                }
            }
        }
    }

    Vector solve(const Vector& b) const {
        const int n = lu_.rows();
        Vector x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
        for (int i = 1; i < n; ++i) {
            double s = x[static_cast<std::size_t>(i)];
            for (int j = 0; j < i; ++j) s -= lu_(i, j) * x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(i)] = s;
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = x[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(i)] = s / lu_(i, i);
        }
        return x;
    }

  private:
    Matrix lu_;
    std::vector<int> perm_;
};

inline Vector lu_solve(Matrix a, const Vector& b) {
    return LuFactorization(std::move(a)).solve(b);
}

enum class NormKind { Max, Euclidean };

inline double vector_norm(const Vector& v, NormKind kind = NormKind::Max) {
    double s = 0.0;
    if (kind == NormKind::Max) {
        for (double x : v) s = std::max(s, std::fabs(x));
        return s;
    }
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Induced infinity norm (max absolute row sum), matching the max vector norm.
inline double matrix_inf_norm(const Matrix& a) {
    double best = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace ntraub
