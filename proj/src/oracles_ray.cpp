#include <cmath>

#include "cluttergen/oracles.hpp"

namespace cluttergen {

std::optional<double> oracleRayMesh(const Vec3& origin, const Vec3& direction,
                                    const TriMesh& mesh, const Pose& meshPose) {
    std::optional<double> best;
    for (const auto& tri : mesh.triangles) {
        Vec3 a = meshPose.apply(mesh.vertices[tri[0]]);
        Vec3 b = meshPose.apply(mesh.vertices[tri[1]]);
        Vec3 c = meshPose.apply(mesh.vertices[tri[2]]);

        Vec3 n = (b - a).cross(c - a);
        double denom = n.dot(direction);
        if (std::abs(denom) < 1e-14) continue;  // ray parallel to plane
        double t = n.dot(a - origin) / denom;
        if (t <= 1e-13) continue;

        // Barycentric containment via projected areas.
        Vec3 p = origin + direction * t;
        double full = n.squaredNorm();
        double w0 = (b - p).cross(c - p).dot(n);
        double w1 = (c - p).cross(a - p).dot(n);
        double w2 = (a - p).cross(b - p).dot(n);
        double tol = -1e-10 * full;
        if (w0 < tol || w1 < tol || w2 < tol) continue;
        if (!best || t < *best) best = t;
    }
    return best;
}

double oracleMinRectArea(const std::vector<Vec2>& points) {
    double best = 1e300;
    for (int deg = 0; deg < 90; ++deg) {
        double a = degToRad(deg);
        double ca = std::cos(a), sa = std::sin(a);
        double xLo = 1e300, xHi = -1e300, yLo = 1e300, yHi = -1e300;
        for (const auto& p : points) {
            double u = ca * p.x + sa * p.y;
            double v = -sa * p.x + ca * p.y;
            xLo = std::min(xLo, u);
            xHi = std::max(xHi, u);
            yLo = std::min(yLo, v);
            yHi = std::max(yHi, v);
        }
        best = std::min(best, (xHi - xLo) * (yHi - yLo));
    }
    return best;
}

} // namespace cluttergen
