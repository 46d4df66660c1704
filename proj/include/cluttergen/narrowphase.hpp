#pragma once

#include "cluttergen/convex.hpp"
#include "cluttergen/geom.hpp"

namespace cluttergen {

// Closest-point query between two posed convex hulls (hull cores, without
// any collision margin). When the cores overlap, `normal` and `depth` come
// from an expanding-polytope pass instead of witness points.
struct DistanceResult {
    bool intersecting = false;
    double distance = 0.0;  // core-to-core; 0 when intersecting
    double depth = 0.0;     // core overlap along `normal` when intersecting
    Vec3 pointA, pointB;    // witness points, world frame (valid if separated)
    Vec3 normal;            // unit, from A toward B
};

DistanceResult convexDistance(const ConvexHull& a, const Pose& poseA,
                              const ConvexHull& b, const Pose& poseB);

} // namespace cluttergen
