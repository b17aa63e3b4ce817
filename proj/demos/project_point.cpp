// Projects a point onto the standard simplex under a custom SPD metric and
// prints the distance landscape: squared distance to every hyperface of the
// full simplex, then the chosen projection and its active face.

#include <cmath>
#include <cstdio>

#include "simplexproj/simplexproj.hpp"

int main() {
    using namespace simplexproj;

    // Inner product <x,y> = x^T C y, e.g. a covariance of three assets.
    MetricMatrix c = build_metric(Matrix::from_rows({{0.030, 0.010, 0.005},
                                                     {0.010, 0.025, 0.008},
                                                     {0.005, 0.008, 0.040}}));

    // A hyperplane point (coordinates sum to 1) that leaves the simplex.
    const Vec a{1.30, -0.45, 0.15};

    std::printf("point            (%+.4f, %+.4f, %+.4f)\n", a[0], a[1], a[2]);
    for (const auto& [dropped, sq] : hyperface_distances(c, a, FaceIndexSet::full(3)))
        std::printf("drop coord %d  -> distance %.6f\n", dropped, std::sqrt(sq));

    const ProjectionResult res = project_onto_simplex(c, a);
    std::printf("projection       (%.6f, %.6f, %.6f)\n", res.point.coords[0],
                res.point.coords[1], res.point.coords[2]);
    std::printf("distance         %.6f\n", std::sqrt(res.sq_dist));
    std::printf("active face      {");
    const auto& idx = res.active_face.indices();
    for (std::size_t i = 0; i < idx.size(); ++i)
        std::printf("%s%d", i ? ", " : "", idx[i]);
    std::printf("}\n");
    return 0;
}
