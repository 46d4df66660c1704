#include <algorithm>
#include <cmath>

#include "cluttergen/grasp3d.hpp"
#include "cluttergen/oracles.hpp"

namespace cluttergen {

namespace {

// The oracle rebuilds the gripper layout from scratch as axis intervals in
// grasp coordinates (approach, closing, width), rather than reusing the
// production box structures.
struct GraspCoords {
    Vec3 origin;
    Vec3 a, c, h;

    Vec3 toLocal(const Vec3& p) const {
        Vec3 d = p - origin;
        return {d.dot(a), d.dot(c), d.dot(h)};
    }
};

GraspCoords graspCoords(const Grasp3D& grasp) {
    Vec3 a = grasp.gripperOrientation;
    Vec3 ref = a.cross(Vec3::unitZ());
    Vec3 u0 = ref.norm() < 1e-9 ? Vec3::unitX() : ref.normalized();
    // Rodrigues rotation of u0 about the approach by the jaw angle.
    double ct = std::cos(grasp.approachAngle), st = std::sin(grasp.approachAngle);
    Vec3 c = u0 * ct + a.cross(u0) * st + a * (a.dot(u0) * (1.0 - ct));
    return {grasp.graspPoint, a, c, a.cross(c)};
}

struct Interval3 {
    double aLo, aHi, cLo, cHi, hLo, hHi;
    bool contains(const Vec3& s) const {
        return s.x >= aLo && s.x <= aHi && s.y >= cLo && s.y <= cHi && s.z >= hLo && s.z <= hHi;
    }
};

struct GripperIntervals {
    Interval3 fingerLow, fingerHigh, base, closing;
    double reachSq;  // bounding-sphere radius about the grasp point, squared
};

GripperIntervals gripperIntervals(const GripperModel& g) {
    double halfGap = g.maxOpening / 2.0;
    double outer = halfGap + g.fingerThickness;
    double hw = g.fingerWidth / 2.0;
    GripperIntervals iv;
    iv.fingerLow = {0.0, g.fingerLength, -outer, -halfGap, -hw, hw};
    iv.fingerHigh = {0.0, g.fingerLength, halfGap, outer, -hw, hw};
    iv.base = {-g.baseDepth, 0.0, -outer, outer, -hw, hw};
    iv.closing = {0.0, g.fingerLength, -halfGap, halfGap, -hw, hw};
    double reach = std::max(g.fingerLength, g.baseDepth);
    iv.reachSq = reach * reach + outer * outer + hw * hw;
    return iv;
}

} // namespace

std::vector<SurfaceSamples> oracleSampleScene(const std::vector<PosedMesh>& scene,
                                              double sampleSpacing) {
    std::vector<SurfaceSamples> out;
    for (const PosedMesh& pm : scene) {
        SurfaceSamples s;
        s.objectId = pm.objectId;
        const TriMesh& mesh = *pm.mesh;
        for (const auto& tri : mesh.triangles) {
            Vec3 va = pm.pose.apply(mesh.vertices[static_cast<std::size_t>(tri[0])]);
            Vec3 vb = pm.pose.apply(mesh.vertices[static_cast<std::size_t>(tri[1])]);
            Vec3 vc = pm.pose.apply(mesh.vertices[static_cast<std::size_t>(tri[2])]);
            Vec3 u = vb - va, v = vc - va;
            double longest = std::max(u.norm(), v.norm());
            int m = std::max(1, static_cast<int>(std::ceil(longest / sampleSpacing)));
            for (int i = 0; i <= m; ++i) {
                for (int j = 0; j + i <= m; ++j) {
                    s.points.push_back(va + u * (static_cast<double>(i) / m) +
                                       v * (static_cast<double>(j) / m));
                }
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

bool oracleGraspCollides(const Grasp3D& grasp, const GripperModel& gripper,
                         const std::vector<SurfaceSamples>& samples, int targetId) {
    GraspCoords frame = graspCoords(grasp);
    GripperIntervals iv = gripperIntervals(gripper);
    for (const SurfaceSamples& obj : samples) {
        bool isTarget = obj.objectId == targetId;
        for (const Vec3& p : obj.points) {
            if ((p - frame.origin).squaredNorm() > iv.reachSq) continue;
            Vec3 s = frame.toLocal(p);
            if (iv.fingerLow.contains(s) || iv.fingerHigh.contains(s) || iv.base.contains(s))
                return true;
            if (!isTarget && iv.closing.contains(s)) return true;
        }
    }
    return false;
}

bool oracleGraspCollides(const Grasp3D& grasp, const GripperModel& gripper,
                         const std::vector<PosedMesh>& scene, int targetId,
                         double sampleSpacing) {
    return oracleGraspCollides(grasp, gripper, oracleSampleScene(scene, sampleSpacing), targetId);
}

} // namespace cluttergen
