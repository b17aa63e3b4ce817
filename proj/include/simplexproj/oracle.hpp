#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "simplexproj/errors.hpp"
#include "simplexproj/face.hpp"
#include "simplexproj/hyperplane.hpp"
#include "simplexproj/metric.hpp"
#include "simplexproj/projection.hpp"

namespace simplexproj {

/// Reference projection by exhaustive face enumeration: every nonempty
/// subset J of indices is projected onto, feasible candidates are kept, and
/// the closest one wins (ties go to the lexicographically smallest J). The
/// unique minimizer lies in the relative interior of some face, where it
/// coincides with that face's affine-hull projection, so the sweep cannot
/// miss it. Capped at n <= 12 (4095 solves).
inline ProjectionResult oracle_project(const MetricMatrix& c, const PointN& a,
                                       double tol = kSimplexCoordTol) {
    detail::require_dim(c, a, "oracle_project");
    const std::size_t n = c.dim();
    if (n > 12)
        throw DimensionTooLarge("oracle_project enumerates all 2^n - 1 faces; dimension " +
                                std::to_string(n) + " exceeds the cap of 12");

    PointN best_point;
    double best_sq = 0.0;
    std::vector<int> best_idx;
    bool have = false;

    std::vector<int> idx;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        idx.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(static_cast<int>(i));
        PointN x = project_onto_face_hull(c, a, FaceIndexSet(idx));
        bool feasible = true;
        for (double v : x)
            if (v < -tol) { feasible = false; break; }
        if (!feasible) continue;
        const double sq = sq_distance(c, a, x);
        const bool better = !have || sq < best_sq ||
                            (sq == best_sq && std::lexicographical_compare(
                                                  idx.begin(), idx.end(),
                                                  best_idx.begin(), best_idx.end()));
        if (better) {
            best_point = std::move(x);
            best_sq = sq;
            best_idx = idx;
            have = true;
        }
    }

    if (!have)
        throw NumericalError("oracle_project found no feasible face candidate; "
                             "the metric is numerically corrupt");
    PointN point = detail::clamp_to_simplex(std::move(best_point), tol);
    const double sq = sq_distance(c, a, point);
    FaceIndexSet active = detail::active_face_of(point, tol);
    return ProjectionResult{WeightVector{std::move(point), true}, sq, std::move(active)};
}

/// Sort-and-threshold projection onto the simplex for the identity metric.
inline WeightVector euclidean_sort_project(const PointN& a) {
    const std::size_t n = a.size();
    Vec sorted(a);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double prefix = 0.0, tau = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        prefix += sorted[i];
        const double t = (prefix - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - t > 0.0) tau = t;
    }
    Vec out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(a[i] - tau, 0.0);
    return WeightVector{std::move(out), true};
}

/// Minimum-variance weights on H through the bordered KKT system
/// [[2C, u], [u^T, 0]] (x, lambda) = (0, 1); used to cross-check the
/// closed-form and difference-matrix routes.
inline WeightVector oracle_minvar_hyperplane(const MetricMatrix& c) {
    const std::size_t n = c.dim();
    Matrix kkt(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) kkt(i, j) = 2.0 * c(i, j);
        kkt(i, n) = 1.0;
        kkt(n, i) = 1.0;
    }
    Vec rhs(n + 1, 0.0);
    rhs[n] = 1.0;
    Vec sol = solve_linear(kkt, rhs);
    Vec x(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n));
    bool feasible = true;
    for (double v : x)
        if (v < -kSimplexCoordTol) { feasible = false; break; }
    return WeightVector{std::move(x), feasible};
}

} // namespace simplexproj
