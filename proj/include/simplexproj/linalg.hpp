#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "simplexproj/errors.hpp"

namespace simplexproj {

using Vec = std::vector<double>;

/// Dense row-major matrix. Sized for portfolio-scale problems (n up to a
/// few hundred), not for large sparse systems.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Builds from nested rows; throws NotSquare only where callers require it,
    /// here we only require rectangular input.
    static Matrix from_rows(const std::vector<Vec>& rows) {
        Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw ParseError("matrix rows have inconsistent lengths (row " +
                                 std::to_string(i) + ")");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool square() const { return rows_ == cols_; }

    /// Max row sum of absolute values (induced infinity norm).
    double inf_norm() const {
        double best = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    double max_abs() const {
        double best = 0.0;
        for (double v : data_) best = std::max(best, std::abs(v));
        return best;
    }

    Vec multiply(const Vec& x) const {
        if (x.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
        Vec y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec data_;
};

inline double inf_norm(const Vec& v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

/// Solves M x = b by Gaussian elimination with partial pivoting.
///
/// Contract: the residual satisfies ||Mx - b||_inf <= 1e-10 * (||M||_inf
/// ||x||_inf + ||b||_inf) for well-conditioned systems (condition number
/// below ~1e6). Throws SingularSystem when a pivot falls below
/// n * eps * max|M|.
inline Vec solve_linear(const Matrix& m, const Vec& b) {
    if (!m.square()) throw NotSquare("solve_linear requires a square matrix");
    const std::size_t n = m.rows();
    if (b.size() != n) throw DimensionMismatch("solve_linear: rhs length does not match matrix");
    if (n == 0) return {};

    const double scale = m.max_abs();
    const double pivot_floor =
        static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;

    // Augmented working copy.
    Matrix a(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
        a(i, n) = b[i];
    }

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) <= pivot_floor)
            throw SingularSystem("singular system: pivot " + std::to_string(col) + " is " +
                                 std::to_string(a(piv, col)) + ", below floor " +
                                 std::to_string(pivot_floor));
        if (piv != col)
            for (std::size_t j = col; j <= n; ++j) std::swap(a(piv, j), a(col, j));
        const double d = a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / d;
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (std::size_t j = col + 1; j <= n; ++j) a(r, j) -= f * a(col, j);
        }
    }

    Vec x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = a(i, n);
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

/// Lower Cholesky factor of a symmetric matrix, or nullopt when any pivot
/// drops to n * eps * max-diagonal or below (the definiteness test).
inline std::optional<Matrix> cholesky_lower(const Matrix& a) {
    if (!a.square()) return std::nullopt;
    const std::size_t n = a.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
    const double floor =
        static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_diag;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > floor)) return std::nullopt;
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

} // namespace simplexproj
