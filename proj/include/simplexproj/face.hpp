#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "simplexproj/errors.hpp"
#include "simplexproj/linalg.hpp"
#include "simplexproj/metric.hpp"

namespace simplexproj {

/// Nonempty set of asset indices identifying a face of the simplex. Indices
/// are kept sorted; the pivot is the smallest one.
class FaceIndexSet {
public:
    explicit FaceIndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
        std::sort(indices_.begin(), indices_.end());
        indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
        if (indices_.empty())
            throw DimensionMismatch("face index set must be nonempty");
        if (indices_.front() < 0)
            throw DimensionMismatch("face index set contains a negative index");
    }

    static FaceIndexSet full(std::size_t n) {
        std::vector<int> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
        return FaceIndexSet(std::move(all));
    }

    const std::vector<int>& indices() const { return indices_; }
    int pivot() const { return indices_.front(); }
    std::size_t size() const { return indices_.size(); }
    int operator[](std::size_t k) const { return indices_[k]; }

    FaceIndexSet without(int dropped) const {
        std::vector<int> rest;
        rest.reserve(indices_.size() - 1);
        for (int i : indices_)
            if (i != dropped) rest.push_back(i);
        return FaceIndexSet(std::move(rest));
    }

    bool operator==(const FaceIndexSet& o) const { return indices_ == o.indices_; }

private:
    std::vector<int> indices_;
};

/// Projects `a` orthogonally (in the C-metric) onto the affine hull of the
/// face spanned by the vertices in J: the set of points supported on J whose
/// coordinates sum to 1.
///
/// For |J| = 1 the hull is the single vertex. Otherwise the m x m system has
/// one row per i in J \ {i0}, stating C-orthogonality of x - a to e_{i0} - e_i,
/// plus the all-ones row pinning the sum to 1. The solution is scattered into
/// the J coordinates; all others are exactly zero.
inline PointN project_onto_face_hull(const MetricMatrix& c, const PointN& a,
                                     const FaceIndexSet& face) {
    const std::size_t n = c.dim();
    if (a.size() != n)
        throw DimensionMismatch("project_onto_face_hull: point length " +
                                std::to_string(a.size()) + " against metric of dimension " +
                                std::to_string(n));
    const auto& idx = face.indices();
    if (idx.back() >= static_cast<int>(n))
        throw DimensionMismatch("face index " + std::to_string(idx.back()) +
                                " out of range for dimension " + std::to_string(n));

    PointN x(n, 0.0);
    const std::size_t m = idx.size();
    if (m == 1) {
        x[static_cast<std::size_t>(idx[0])] = 1.0;
        return x;
    }

    const int i0 = face.pivot();
    Matrix b(m, m);
    Vec rhs(m, 0.0);
    for (std::size_t r = 0; r + 1 < m; ++r) {
        const int i = idx[r + 1];
        for (std::size_t col = 0; col < m; ++col) {
            const int j = idx[col];
            b(r, col) = c(i, j) - c(i0, j);
        }
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a[j] * (c(i, j) - c(i0, j));
        rhs[r] = s;
    }
    for (std::size_t col = 0; col < m; ++col) b(m - 1, col) = 1.0;
    rhs[m - 1] = 1.0;

    Vec sol = solve_linear(b, rhs);
    for (std::size_t k = 0; k < m; ++k) x[static_cast<std::size_t>(idx[k])] = sol[k];
    return x;
}

} // namespace simplexproj
