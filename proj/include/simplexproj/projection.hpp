#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "simplexproj/errors.hpp"
#include "simplexproj/face.hpp"
#include "simplexproj/metric.hpp"

namespace simplexproj {

/// Result of projecting a point onto the standard simplex.
struct ProjectionResult {
    WeightVector point;      // feasible_simplex is always true
    double sq_dist = 0.0;    // equals sq_distance(C, a, point) by construction
    FaceIndexSet active_face; // indices where the point exceeds 1e-10
};

/// Counters for one top-level projection call. The recursion over faces is
/// worst-case exponential; these make the observed cost inspectable.
struct ProjectionTrace {
    std::size_t cache_hits = 0;
    std::size_t cache_misses = 0;
    std::size_t hull_projections = 0;
    int max_depth = 0;
};

struct ProjectionOptions {
    double tol = kSimplexCoordTol; // per-coordinate feasibility tolerance
    int max_recursion_dim = 24;    // face size above which the sweep refuses to start
    ProjectionTrace* trace = nullptr;
};

/// Membership test for the standard simplex: every coordinate >= -tol and
/// the sum within max(tol, 1e-9) of one.
inline bool is_in_simplex(const PointN& x, double tol) {
    for (double v : x)
        if (v < -tol) return false;
    return std::abs(sum(x) - 1.0) <= std::max(tol, kWeightSumTol);
}

namespace detail {

struct FaceResult {
    PointN point;
    double sq_dist; // from the query point of the call that produced it
};

// Memo shared across one top-level call, keyed by (face bitmask, exact bit
// pattern of the query point).
class FaceCache {
public:
    const FaceResult* find(std::uint64_t mask, const PointN& q) const {
        auto it = map_.find(key(mask, q));
        return it == map_.end() ? nullptr : &it->second;
    }
    void store(std::uint64_t mask, const PointN& q, FaceResult r) {
        map_.emplace(key(mask, q), std::move(r));
    }

private:
    static std::string key(std::uint64_t mask, const PointN& q) {
        std::string k(sizeof mask + q.size() * sizeof(double), '\0');
        std::memcpy(k.data(), &mask, sizeof mask);
        std::memcpy(k.data() + sizeof mask, q.data(), q.size() * sizeof(double));
        return k;
    }
    std::unordered_map<std::string, FaceResult> map_;
};

inline std::uint64_t face_mask(const FaceIndexSet& face) {
    std::uint64_t m = 0;
    for (int i : face.indices()) m |= std::uint64_t{1} << i;
    return m;
}

inline bool face_coords_feasible(const PointN& x, const FaceIndexSet& face, double tol) {
    for (int i : face.indices())
        if (x[static_cast<std::size_t>(i)] < -tol) return false;
    return true;
}

// One level of the recursion: distance from `a` to the sub-simplex spanned
// by `face`. Projects onto the face's affine hull; if that lands in the
// sub-simplex we are done. A 1-simplex falls back to the closer vertex.
// Otherwise every hyperface is scored by its own full recursive distance
// from the projected point (picking the hyperface by farthest-vertex removal
// would be wrong), and the best one is descended into.
inline FaceResult project_recursive(const MetricMatrix& c, const PointN& a,
                                    const FaceIndexSet& face, const ProjectionOptions& opt,
                                    FaceCache& cache, ProjectionTrace& trace, int depth) {
    trace.max_depth = std::max(trace.max_depth, depth);
    ++trace.hull_projections;
    PointN x = project_onto_face_hull(c, a, face);

    if (face_coords_feasible(x, face, opt.tol)) {
        const double sq = sq_distance(c, a, x);
        return FaceResult{std::move(x), sq};
    }

    if (face.size() == 2) {
        PointN v0(a.size(), 0.0), v1(a.size(), 0.0);
        v0[static_cast<std::size_t>(face[0])] = 1.0;
        v1[static_cast<std::size_t>(face[1])] = 1.0;
        // closer vertex to the hull projection; the smaller index wins ties
        const bool first = sq_distance(c, x, v0) <= sq_distance(c, x, v1);
        PointN& v = first ? v0 : v1;
        const double sq = sq_distance(c, a, v);
        return FaceResult{std::move(v), sq};
    }

    if (static_cast<int>(face.size()) > opt.max_recursion_dim)
        throw DimensionTooLarge(
            "simplex projection needs the recursive face sweep on a face of size " +
            std::to_string(face.size()) + ", above the limit " +
            std::to_string(opt.max_recursion_dim) +
            " (raise via SIMPLEXPROJ_MAX_DIM or ProjectionOptions)");

    const FaceResult* best = nullptr;
    for (int dropped : face.indices()) {
        const FaceIndexSet sub = face.without(dropped);
        const std::uint64_t mask = face_mask(sub);
        const FaceResult* r = cache.find(mask, x);
        if (r) {
            ++trace.cache_hits;
        } else {
            ++trace.cache_misses;
            FaceResult computed = project_recursive(c, x, sub, opt, cache, trace, depth + 1);
            cache.store(mask, x, std::move(computed));
            r = cache.find(mask, x);
        }
        if (!best || r->sq_dist < best->sq_dist) best = r;
    }
    return FaceResult{best->point, sq_distance(c, a, best->point)};
}

// Clamps coordinates in [-tol, 0) to exact zero; renormalizes the sum only
// when something was clamped, so strictly feasible results pass through
// bit-identical.
inline PointN clamp_to_simplex(PointN x, double tol) {
    bool clamped = false;
    for (double& v : x)
        if (v < 0.0 && v >= -tol) { v = 0.0; clamped = true; }
    if (clamped) {
        const double s = sum(x);
        for (double& v : x) v /= s;
    }
    return x;
}

inline FaceIndexSet active_face_of(const PointN& x, double tol) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > tol) idx.push_back(static_cast<int>(i));
    return FaceIndexSet(std::move(idx));
}

} // namespace detail

/// Projects an arbitrary point of R^n onto the standard simplex under the
/// C-metric, returning the unique minimizer of ||x - a||_C over the simplex.
///
/// The search recurses on (point, face): hull projection first, then — when
/// that is infeasible — a full recursive distance for every hyperface of the
/// current face, descending into the closest one. Results are memoized per
/// top-level call on (face, exact query point). Work grows exponentially in
/// the worst case, so the sweep refuses faces larger than
/// `max_recursion_dim` (default 24); the guard never fires when the first
/// hull projection is already feasible, which is the common case for
/// portfolio covariance data.
inline ProjectionResult project_onto_simplex(const MetricMatrix& c, const PointN& a,
                                             const ProjectionOptions& opt = {}) {
    detail::require_dim(c, a, "project_onto_simplex");
    const std::size_t n = c.dim();

    ProjectionTrace local_trace;
    ProjectionTrace& trace = opt.trace ? *opt.trace : local_trace;
    trace = ProjectionTrace{};

    PointN point;
    if (is_in_simplex(a, opt.tol)) {
        point = detail::clamp_to_simplex(a, opt.tol);
    } else {
        detail::FaceCache cache;
        detail::FaceResult r = detail::project_recursive(c, a, FaceIndexSet::full(n), opt,
                                                         cache, trace, 0);
        point = detail::clamp_to_simplex(std::move(r.point), opt.tol);
    }

    const double sq = sq_distance(c, a, point);
    FaceIndexSet active = detail::active_face_of(point, opt.tol);
    return ProjectionResult{WeightVector{std::move(point), true}, sq, std::move(active)};
}

/// Full recursive squared distance from `x` to every hyperface of the face
/// spanned by J, one entry per dropped index, in increasing dropped-index
/// order. The minimum entry identifies the closest hyperface; on ties the
/// smallest dropped index comes first and should be preferred.
inline std::vector<std::pair<int, double>> hyperface_distances(const MetricMatrix& c,
                                                               const PointN& x,
                                                               const FaceIndexSet& face,
                                                               const ProjectionOptions& opt = {}) {
    detail::require_dim(c, x, "hyperface_distances");
    if (face.size() < 3)
        throw DimensionMismatch("hyperface_distances requires a face with at least 3 vertices");

    ProjectionTrace local_trace;
    ProjectionTrace& trace = opt.trace ? *opt.trace : local_trace;
    detail::FaceCache cache;
    std::vector<std::pair<int, double>> out;
    out.reserve(face.size());
    for (int dropped : face.indices()) {
        detail::FaceResult r =
            detail::project_recursive(c, x, face.without(dropped), opt, cache, trace, 0);
        out.emplace_back(dropped, r.sq_dist);
    }
    return out;
}

} // namespace simplexproj
