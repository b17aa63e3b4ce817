#pragma once

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "simplexproj/errors.hpp"
#include "simplexproj/linalg.hpp"
#include "simplexproj/metric.hpp"

namespace simplexproj {

/// Aligned per-period return rates (fractions) for named assets. Rows are
/// periods in increasing label order, columns follow asset_ids. Complete by
/// construction: no missing cells.
struct ReturnPanel {
    std::vector<std::string> asset_ids;
    std::vector<std::string> periods; // ISO dates of period end, strictly increasing
    Matrix returns;                   // T x n

    std::size_t period_count() const { return returns.rows(); }
    std::size_t asset_count() const { return returns.cols(); }
};

/// Throws when a panel violates its shape invariants (used by loaders; the
/// struct itself stays an aggregate so tests can build edge cases directly).
inline void validate_panel(const ReturnPanel& p) {
    if (p.returns.cols() != p.asset_ids.size())
        throw ParseError("panel has " + std::to_string(p.returns.cols()) +
                         " return columns for " + std::to_string(p.asset_ids.size()) +
                         " asset ids");
    if (p.returns.rows() != p.periods.size())
        throw ParseError("panel has " + std::to_string(p.returns.rows()) +
                         " return rows for " + std::to_string(p.periods.size()) +
                         " period labels");
    if (p.periods.size() < 2) throw TooFewSamples("panel must cover at least 2 periods");
    for (std::size_t t = 1; t < p.periods.size(); ++t)
        if (!(p.periods[t - 1] < p.periods[t]))
            throw ParseError("panel period labels are not strictly increasing at row " +
                             std::to_string(t));
    std::set<std::string> ids(p.asset_ids.begin(), p.asset_ids.end());
    if (ids.size() != p.asset_ids.size())
        throw ParseError("panel asset ids are not distinct");
}

/// Sample mean vector and covariance metric of a return panel.
struct MomentEstimates {
    Vec mean;
    MetricMatrix cov;
    std::size_t sample_count = 0;
};

/// Estimates m and C from the panel. ddof = 1 (default) divides by T-1,
/// ddof = 0 by T. Each covariance entry is computed once per unordered pair,
/// so the matrix is symmetric to the bit.
inline MomentEstimates estimate_moments(const ReturnPanel& panel, int ddof = 1) {
    const std::size_t t_count = panel.period_count();
    const std::size_t n = panel.asset_count();
    if (t_count < 2)
        throw TooFewSamples("moment estimation needs at least 2 periods, got " +
                            std::to_string(t_count));
    if (ddof != 0 && ddof != 1)
        throw ValidationError("ddof must be 0 or 1, got " + std::to_string(ddof));

    Vec mean(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < t_count; ++t) s += panel.returns(t, j);
        mean[j] = s / static_cast<double>(t_count);
    }

    const double denom = static_cast<double>(t_count - static_cast<std::size_t>(ddof));
    Matrix cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < t_count; ++t)
                s += (panel.returns(t, i) - mean[i]) * (panel.returns(t, j) - mean[j]);
            const double v = s / denom;
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    return MomentEstimates{std::move(mean), build_metric(cov), t_count};
}

/// Mean and standard deviation of the portfolio's per-period return:
/// w^T m and sqrt(w^T C w).
inline std::pair<double, double> portfolio_moments(const MomentEstimates& est,
                                                   const WeightVector& w) {
    const std::size_t n = est.mean.size();
    if (w.coords.size() != n)
        throw DimensionMismatch("portfolio_moments: " + std::to_string(w.coords.size()) +
                                " weights against " + std::to_string(n) + " assets");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += w.coords[i] * est.mean[i];
    const double variance = inner(est.cov, w.coords, w.coords);
    return {mean, std::sqrt(std::max(variance, 0.0))};
}

} // namespace simplexproj
