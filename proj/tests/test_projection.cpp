#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "simplexproj/simplexproj.hpp"
#include "support.hpp"

using namespace simplexproj;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
MetricMatrix example_metric() {
    return build_metric(Matrix::from_rows({{0.012, 0.004, 0.008},
                                           {0.004, 0.011, 0.007},
                                           {0.008, 0.007, 0.011}}));
}
const Vec kExamplePoint{0.470, 0.534, -0.004};
} // namespace

TEST_CASE("three-asset example projects onto the expected edge") {
    MetricMatrix c = example_metric();
    auto res = project_onto_simplex(c, kExamplePoint);

    REQUIRE_THAT(res.point.coords[0], WithinAbs(0.46786666666666665, 1e-12));
    REQUIRE_THAT(res.point.coords[1], WithinAbs(0.53213333333333335, 1e-12));
    REQUIRE(res.point.coords[2] == 0.0);
    REQUIRE_THAT(res.sq_dist, WithinRel(5.9733333333333339e-08, 1e-10));
    REQUIRE(res.active_face == FaceIndexSet({0, 1}));
    REQUIRE(res.point.feasible_simplex);
}

TEST_CASE("vertex and edge distances order as hand-computed") {
    MetricMatrix c = example_metric();
    const Vec& x = kExamplePoint;

    Vec e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
    const double d1 = std::sqrt(sq_distance(c, x, e1));
    const double d2 = std::sqrt(sq_distance(c, x, e2));
    const double d3 = std::sqrt(sq_distance(c, x, e3));
    REQUIRE_THAT(d1, WithinAbs(0.065173215357230918, 1e-13));
    REQUIRE_THAT(d2, WithinAbs(0.057302251264675454, 1e-13));
    REQUIRE_THAT(d3, WithinAbs(0.061867180313959678, 1e-13));
    REQUIRE(d2 < d3);
    REQUIRE(d3 < d1);

    auto dists = hyperface_distances(c, x, FaceIndexSet::full(3));
    REQUIRE(dists.size() == 3);
    REQUIRE(dists[0].first == 0);
    REQUIRE_THAT(dists[0].second, WithinRel(0.0015463, 1e-10));
    REQUIRE(dists[1].first == 1);
    REQUIRE_THAT(dists[1].second, WithinRel(0.002281248, 1e-10));
    REQUIRE(dists[2].first == 2);
    REQUIRE_THAT(dists[2].second, WithinRel(5.9733333333333339e-08, 1e-10));

    // the closest edge excludes the third vertex even though the first
    // vertex is the farthest one; dropping the farthest vertex would pick
    // the wrong edge here
    REQUIRE(dists[2].second < dists[0].second);
    REQUIRE(dists[0].second < dists[1].second);
}

TEST_CASE("hyperface distances need at least a 2-face") {
    MetricMatrix c = example_metric();
    REQUIRE_THROWS_AS(hyperface_distances(c, kExamplePoint, FaceIndexSet({0, 1})),
                      DimensionMismatch);
}

TEST_CASE("interior points short-circuit without recursion") {
    MetricMatrix c = example_metric();
    Vec a{0.2, 0.3, 0.5};
    ProjectionTrace trace;
    ProjectionOptions opt;
    opt.trace = &trace;
    auto res = project_onto_simplex(c, a, opt);
    REQUIRE(res.point.coords == a);
    REQUIRE(res.sq_dist == 0.0);
    REQUIRE(res.active_face == FaceIndexSet({0, 1, 2}));
    REQUIRE(trace.hull_projections == 0);
}

TEST_CASE("recursion trace matches the expected shape on the 3-asset example") {
    MetricMatrix c = example_metric();
    ProjectionTrace trace;
    ProjectionOptions opt;
    opt.trace = &trace;
    project_onto_simplex(c, kExamplePoint, opt);
    // one top-level hull projection plus one per edge; every edge lands
    // feasible so the recursion stops at depth one
    REQUIRE(trace.hull_projections == 4);
    REQUIRE(trace.cache_misses == 3);
    REQUIRE(trace.cache_hits == 0);
    REQUIRE(trace.max_depth == 1);
}

TEST_CASE("slightly negative coordinates are clamped to exact zeros") {
    MetricMatrix c = example_metric();
    Vec a{0.5, 0.5 + 1e-12, -1e-12};
    auto res = project_onto_simplex(c, a);
    REQUIRE(res.point.coords[2] == 0.0);
    for (double v : res.point.coords) REQUIRE(v >= 0.0);
    REQUIRE_THAT(sum(res.point.coords), WithinAbs(1.0, 1e-12));
    REQUIRE(res.active_face == FaceIndexSet({0, 1}));
}

TEST_CASE("identity metric reduces to the sorting projection") {
    MetricMatrix c = build_metric(Matrix::identity(3));
    auto res = project_onto_simplex(c, Vec{10.0, -5.0, -5.0});
    REQUIRE(res.point.coords == Vec{1.0, 0.0, 0.0});
    REQUIRE_THAT(res.sq_dist, WithinRel(131.0, 1e-12));
    REQUIRE(res.active_face == FaceIndexSet({0}));

    std::mt19937_64 rng(74001);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + rep % 9;
        MetricMatrix id = build_metric(Matrix::identity(n));
        Vec a = testsup::random_point(n, rng);
        auto got = project_onto_simplex(id, a);
        auto want = euclidean_sort_project(a);
        for (std::size_t i = 0; i < n; ++i)
            REQUIRE_THAT(got.point.coords[i], WithinAbs(want.coords[i], 1e-9));
    }
}

TEST_CASE("recursive projection agrees with the exhaustive reference") {
    std::mt19937_64 rng(74002);
    for (int rep = 0; rep < 150; ++rep) {
        const std::size_t n = 2 + rep % 4;
        MetricMatrix c = build_metric(testsup::random_spd(n, rng));
        Vec a = testsup::random_point(n, rng);

        auto alg = project_onto_simplex(c, a);
        auto ref = oracle_project(c, a);
        REQUIRE(std::abs(alg.sq_dist - ref.sq_dist) <= 1e-8 * (ref.sq_dist + 1e-15));
        for (std::size_t i = 0; i < n; ++i)
            REQUIRE_THAT(alg.point.coords[i], WithinAbs(ref.point.coords[i], 1e-6));

        // global optimality against random feasible competitors
        for (int k = 0; k < 20; ++k) {
            Vec y = testsup::random_feasible(n, rng);
            REQUIRE(alg.sq_dist <= sq_distance(c, a, y) + 1e-12);
        }

        // splitting the distance at the hyperplane projection is exact:
        // dist(a, K)^2 = dist(a, aH)^2 + dist(aH, K)^2
        Vec ah = project_onto_face_hull(c, a, FaceIndexSet::full(n));
        auto inner_res = project_onto_simplex(c, ah);
        const double lhs = alg.sq_dist;
        const double rhs = sq_distance(c, a, ah) + inner_res.sq_dist;
        REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::max({lhs, rhs, 1e-12}));
    }
}

TEST_CASE("projection is idempotent and deterministic") {
    std::mt19937_64 rng(74003);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rep % 5;
        MetricMatrix c = build_metric(testsup::random_spd(n, rng));
        Vec a = testsup::random_point(n, rng);
        auto r1 = project_onto_simplex(c, a);
        auto r2 = project_onto_simplex(c, a);
        REQUIRE(r1.point.coords == r2.point.coords);
        REQUIRE(r1.sq_dist == r2.sq_dist);

        auto again = project_onto_simplex(c, r1.point.coords);
        REQUIRE(again.point.coords == r1.point.coords);
        REQUIRE(again.sq_dist == 0.0);
    }
}

TEST_CASE("recursion guard restricts the sweep dimension") {
    MetricMatrix c3 = example_metric();
    ProjectionOptions tight;
    tight.max_recursion_dim = 2;
    REQUIRE_THROWS_AS(project_onto_simplex(c3, kExamplePoint, tight), DimensionTooLarge);

    // sum of coordinates is 1, so the hull projection is the point itself
    // and the infeasible sweep at size 25 trips the default guard
    const std::size_t n = 25;
    MetricMatrix c = build_metric(Matrix::identity(n));
    Vec a(n, -1.0);
    a[0] = 25.0;
    REQUIRE_THROWS_AS(project_onto_simplex(c, a), DimensionTooLarge);

    // a feasible point of the same size never reaches the sweep
    Vec feasible(n, 1.0 / static_cast<double>(n));
    REQUIRE_NOTHROW(project_onto_simplex(c, feasible));
}

TEST_CASE("one-dimensional simplex is the single point 1") {
    MetricMatrix c = build_metric(Matrix::from_rows({{2.0}}));
    auto res = project_onto_simplex(c, Vec{5.0});
    REQUIRE(res.point.coords == Vec{1.0});
    REQUIRE_THAT(res.sq_dist, WithinRel(32.0, 1e-13));
    REQUIRE(res.active_face == FaceIndexSet({0}));
}

TEST_CASE("dimension mismatch between metric and point is rejected") {
    MetricMatrix c = example_metric();
    REQUIRE_THROWS_AS(project_onto_simplex(c, Vec{0.5, 0.5}), DimensionMismatch);
}
