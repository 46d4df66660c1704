#pragma once

#include <vector>

#include "cluttergen/geom.hpp"
#include "cluttergen/mesh.hpp"

namespace cluttergen {

// Convex proxy used by the simulator: hull vertices plus precomputed mass
// properties for unit density (scale by the actual density to get mass).
struct ConvexHull {
    std::vector<Vec3> vertices;                 // hull vertices only
    std::vector<std::array<int, 3>> faces;      // outward-wound triangles
    double volume = 0.0;
    Vec3 centroid;                              // volume centroid
    Mat3 unitInertia;                           // inertia about centroid, density 1

    Vec3 support(const Vec3& dir) const;        // farthest vertex along dir
    int supportIndex(const Vec3& dir) const;
    Aabb bounds() const;
};

// 3D quickhull over an arbitrary point set. Throws std::invalid_argument if
// the points are degenerate (fewer than 4 distinct points, or all coplanar).
ConvexHull computeConvexHull(const std::vector<Vec3>& points);

inline ConvexHull computeConvexHull(const TriMesh& mesh) {
    return computeConvexHull(mesh.vertices);
}

} // namespace cluttergen
