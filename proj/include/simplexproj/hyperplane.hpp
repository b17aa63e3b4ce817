#pragma once

#include <cmath>
#include <cstddef>

#include "simplexproj/errors.hpp"
#include "simplexproj/linalg.hpp"
#include "simplexproj/metric.hpp"

namespace simplexproj {

/// Minimizer of f(x) = x^T C x over the hyperplane H (short-selling allowed).
struct HyperplaneSolution {
    enum class Method { ClosedForm, MatrixA };
    WeightVector weights;
    double variance = 0.0; // f at the solution
    Method method = Method::ClosedForm;
};

namespace detail {
inline HyperplaneSolution finish_hyperplane(const MetricMatrix& c, Vec x,
                                            HyperplaneSolution::Method method) {
    bool feasible = true;
    for (double v : x)
        if (v < -kSimplexCoordTol) { feasible = false; break; }
    HyperplaneSolution out;
    out.variance = inner(c, x, x);
    out.weights = WeightVector{std::move(x), feasible};
    out.method = method;
    return out;
}
} // namespace detail

/// Minimum-variance weights on H via the closed form C^{-1}u / (u^T C^{-1} u),
/// evaluated as one linear solve followed by normalization by the sum.
inline HyperplaneSolution minvar_closed_form(const MetricMatrix& c) {
    const std::size_t n = c.dim();
    Vec y = solve_linear(c.matrix(), Vec(n, 1.0));
    const double s = sum(y); // equals u^T C^{-1} u
    for (double& v : y) v /= s;
    return detail::finish_hyperplane(c, std::move(y), HyperplaneSolution::Method::ClosedForm);
}

/// Same minimizer through the bordered difference matrix: rows
/// (c_{0,j} - c_{i,j})_j for i = 1..n-1 plus an all-ones row; the solution is
/// the last column of the inverse, i.e. the solve against (0,...,0,1).
inline HyperplaneSolution minvar_matrix_a(const MetricMatrix& c) {
    const std::size_t n = c.dim();
    if (n < 2) throw DimensionMismatch("minvar_matrix_a requires dimension >= 2");
    Matrix a(n, n);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i - 1, j) = c(0, j) - c(i, j);
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    Vec rhs(n, 0.0);
    rhs[n - 1] = 1.0;
    Vec x = solve_linear(a, rhs);
    return detail::finish_hyperplane(c, std::move(x), HyperplaneSolution::Method::MatrixA);
}

/// Two-asset special case: weights ((v2-cov)/(v1+v2-2cov), (v1-cov)/(v1+v2-2cov)).
inline WeightVector minvar_two_asset(double v1, double v2, double cov) {
    const double denom = v1 + v2 - 2.0 * cov;
    if (std::abs(denom) <= 1e-14)
        throw DegenerateMetric("two-asset minimum-variance weights are undefined: "
                               "v1 + v2 - 2*cov vanishes");
    Vec x{(v2 - cov) / denom, (v1 - cov) / denom};
    bool feasible = x[0] >= -kSimplexCoordTol && x[1] >= -kSimplexCoordTol;
    return WeightVector{std::move(x), feasible};
}

} // namespace simplexproj
