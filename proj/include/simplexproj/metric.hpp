#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "simplexproj/errors.hpp"
#include "simplexproj/linalg.hpp"

namespace simplexproj {

/// A point of R^n with no constraint attached.
using PointN = Vec;

/// A point of the hyperplane H = { x : sum x_i = 1 }. `feasible_simplex`
/// marks membership in the standard simplex (all coordinates >= -1e-10).
struct WeightVector {
    Vec coords;
    bool feasible_simplex = false;
};

inline constexpr double kWeightSumTol = 1e-9;
inline constexpr double kSimplexCoordTol = 1e-10;

/// Symmetric positive definite matrix defining the inner product
/// <x,y> = x^T C y. Immutable once built; the lower Cholesky factor is
/// computed at construction and kept.
class MetricMatrix {
public:
    std::size_t dim() const { return c_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return c_(i, j); }
    const Matrix& matrix() const { return c_; }
    const Matrix& chol_lower() const { return chol_; }

    friend MetricMatrix build_metric(const Matrix& raw);

private:
    MetricMatrix(Matrix c, Matrix chol) : c_(std::move(c)), chol_(std::move(chol)) {}
    Matrix c_;
    Matrix chol_;
};

/// Validates a raw covariance array into a MetricMatrix.
///
/// Symmetry is enforced by averaging (raw + raw^T)/2 before the definiteness
/// test; asymmetry beyond 1e-8 * max|raw| is rejected outright. Definiteness
/// means the Cholesky factorization succeeds with every pivot above
/// n * eps * max-diagonal.
inline MetricMatrix build_metric(const Matrix& raw) {
    if (!raw.square())
        throw NotSquare("metric matrix must be square, got " + std::to_string(raw.rows()) +
                        "x" + std::to_string(raw.cols()));
    const std::size_t n = raw.rows();
    if (n == 0) throw NotSquare("metric matrix must be nonempty");

    const double scale = raw.max_abs();
    double max_asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            max_asym = std::max(max_asym, std::abs(raw(i, j) - raw(j, i)));
    if (max_asym > 1e-8 * scale)
        throw NotSymmetric("matrix asymmetry " + std::to_string(max_asym) +
                           " exceeds 1e-8 * max|entry| = " + std::to_string(1e-8 * scale));

    Matrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = 0.5 * (raw(i, j) + raw(j, i));

    auto chol = cholesky_lower(c);
    if (!chol)
        throw NotPositiveDefinite(
            "matrix is not positive definite (Cholesky pivot at or below "
            "n * eps * max-diagonal)");
    return MetricMatrix(std::move(c), std::move(*chol));
}

inline MetricMatrix build_metric(const std::vector<Vec>& raw_rows) {
    return build_metric(Matrix::from_rows(raw_rows));
}

namespace detail {
inline void require_dim(const MetricMatrix& c, const Vec& x, const char* what) {
    if (x.size() != c.dim())
        throw DimensionMismatch(std::string(what) + ": vector of length " +
                                std::to_string(x.size()) + " against metric of dimension " +
                                std::to_string(c.dim()));
}
} // namespace detail

/// Generalized inner product <x,y> = x^T C y.
inline double inner(const MetricMatrix& c, const Vec& x, const Vec& y) {
    detail::require_dim(c, x, "inner");
    detail::require_dim(c, y, "inner");
    const std::size_t n = c.dim();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += c(i, j) * y[j];
        total += x[i] * row;
    }
    return total;
}

/// Squared generalized distance (x-y)^T C (x-y), computed as
/// inner(C, x-y, x-y) so the quadratic-form identity holds exactly.
inline double sq_distance(const MetricMatrix& c, const Vec& x, const Vec& y) {
    detail::require_dim(c, x, "sq_distance");
    detail::require_dim(c, y, "sq_distance");
    Vec d(x.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = x[i] - y[i];
    return inner(c, d, d);
}

inline double sum(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

/// Checks the WeightVector hyperplane invariant and the simplex flag,
/// throwing InvalidWeights when the sum strays from 1 by more than 1e-9.
inline WeightVector make_weight_vector(Vec coords) {
    const double s = sum(coords);
    if (std::abs(s - 1.0) > kWeightSumTol)
        throw InvalidWeights("weights sum to " + std::to_string(s) +
                             ", which differs from 1 by more than 1e-9");
    bool feasible = true;
    for (double x : coords)
        if (x < -kSimplexCoordTol) { feasible = false; break; }
    return WeightVector{std::move(coords), feasible};
}

} // namespace simplexproj
