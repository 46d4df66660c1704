#include "cluttergen/grasp3d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cluttergen {

namespace {

Vec3 closingFromApproach(const Vec3& approach, double theta) {
    Vec3 ref = approach.cross(Vec3::unitZ());
    Vec3 u0 = ref.norm() < 1e-9 ? Vec3::unitX() : ref.normalized();
    Vec3 v0 = approach.cross(u0);
    return u0 * std::cos(theta) + v0 * std::sin(theta);
}

void requireUnit(const Vec3& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > 1e-6) throw std::invalid_argument(what);
}

// Exact-touch configurations are structural, not accidental: depth -0.06
// equals the finger length, so fingertip planes land exactly on sampled
// surfaces. The filter inflates its boxes by this margin so grazing contact
// is always classified as a collision, independent of rounding order.
constexpr double kContactMargin = 1e-7;

// Akenine-Moller separating-axis triangle/box overlap; the triangle is
// already expressed in the box frame (box centered at the origin). Touching
// counts as overlap, which keeps the filter conservative.
bool triangleOverlapsBox(const Vec3& half, const Vec3& v0, const Vec3& v1, const Vec3& v2) {
    auto overlapOn = [&](const Vec3& axis) {
        double p0 = v0.dot(axis), p1 = v1.dot(axis), p2 = v2.dot(axis);
        double r = half.x * std::abs(axis.x) + half.y * std::abs(axis.y) +
                   half.z * std::abs(axis.z) + kContactMargin;
        return std::min({p0, p1, p2}) <= r && std::max({p0, p1, p2}) >= -r;
    };
    Vec3 e0 = v1 - v0, e1 = v2 - v1, e2 = v0 - v2;
    const Vec3 axes[9] = {
        {0.0, -e0.z, e0.y}, {0.0, -e1.z, e1.y}, {0.0, -e2.z, e2.y},
        {e0.z, 0.0, -e0.x}, {e1.z, 0.0, -e1.x}, {e2.z, 0.0, -e2.x},
        {-e0.y, e0.x, 0.0}, {-e1.y, e1.x, 0.0}, {-e2.y, e2.x, 0.0},
    };
    for (const Vec3& ax : axes)
        if (!overlapOn(ax)) return false;
    if (!overlapOn(Vec3::unitX()) || !overlapOn(Vec3::unitY()) || !overlapOn(Vec3::unitZ()))
        return false;
    return overlapOn(e0.cross(e1));
}

struct LocalBox {
    Vec3 center;
    Vec3 axes[3];
    Vec3 half;
};

LocalBox boxInMeshFrame(const OrientedBox& box, const Pose& pose) {
    Quat inv = pose.rotation.conjugate();
    LocalBox lb;
    lb.center = pose.applyInverse(box.center);
    for (int k = 0; k < 3; ++k) lb.axes[k] = inv.rotate(box.axes[k]);
    lb.half = box.half;
    return lb;
}

Aabb boxBounds(const LocalBox& b) {
    Vec3 e{kContactMargin, kContactMargin, kContactMargin};
    for (int k = 0; k < 3; ++k) {
        double hk = b.half[k];
        e.x += hk * std::abs(b.axes[k].x);
        e.y += hk * std::abs(b.axes[k].y);
        e.z += hk * std::abs(b.axes[k].z);
    }
    Aabb out;
    out.lo = b.center - e;
    out.hi = b.center + e;
    return out;
}

// Crossing-parity test along a fixed skew direction; catches the case of a
// gripper box buried entirely inside a mesh, which no triangle test sees.
bool pointInsideMesh(const PosedMesh& pm, const Vec3& worldPoint) {
    Vec3 p = pm.pose.applyInverse(worldPoint);
    const Aabb& root = pm.bvh->rootBounds();
    if (p.x < root.lo.x || p.y < root.lo.y || p.z < root.lo.z || p.x > root.hi.x ||
        p.y > root.hi.y || p.z > root.hi.z)
        return false;
    const Vec3 dir = Vec3{1.0, 2.0, 3.0}.normalized();
    Vec3 origin = p;
    int crossings = 0;
    for (int i = 0; i < 1000; ++i) {
        auto hit = pm.bvh->raycast(origin, dir);
        if (!hit) break;
        ++crossings;
        origin += dir * (hit->t + 1e-7);
    }
    return (crossings % 2) == 1;
}

bool boxHitsMesh(const OrientedBox& box, const PosedMesh& pm) {
    LocalBox lb = boxInMeshFrame(box, pm.pose);
    Aabb query = boxBounds(lb);
    const TriMesh& mesh = *pm.mesh;
    bool hit = pm.bvh->anyTriangle(query, [&](int face) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(face)];
        Vec3 t[3];
        for (int i = 0; i < 3; ++i) {
            Vec3 d = mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])] -
                     lb.center;
            t[i] = {d.dot(lb.axes[0]), d.dot(lb.axes[1]), d.dot(lb.axes[2])};
        }
        return triangleOverlapsBox(lb.half, t[0], t[1], t[2]);
    });
    return hit || pointInsideMesh(pm, box.center);
}

} // namespace

void GripperModel::validate() const {
    if (maxOpening <= 0.0) throw std::invalid_argument("gripper maxOpening must be positive");
    if (fingerLength <= 0.0) throw std::invalid_argument("gripper fingerLength must be positive");
    if (fingerThickness <= 0.0)
        throw std::invalid_argument("gripper fingerThickness must be positive");
    if (fingerWidth <= 0.0) throw std::invalid_argument("gripper fingerWidth must be positive");
    if (baseDepth <= 0.0) throw std::invalid_argument("gripper baseDepth must be positive");
    if (maxOpening <= 2.0 * fingerThickness)
        throw std::invalid_argument("gripper maxOpening must exceed twice the finger thickness");
}

Vec3 Grasp3D::closingAxis() const {
    return closingFromApproach(gripperOrientation, approachAngle);
}

Vec3 Grasp3D::fingerAxis() const { return gripperOrientation.cross(closingAxis()); }

GripperBoxes gripperBoxes(const Grasp3D& grasp, const GripperModel& gripper) {
    gripper.validate();
    requireUnit(grasp.gripperOrientation, "gripper orientation must be unit length");
    Vec3 a = grasp.approach();
    Vec3 c = grasp.closingAxis();
    Vec3 h = grasp.fingerAxis();
    double len = gripper.fingerLength, open = gripper.maxOpening;
    double th = gripper.fingerThickness, w = gripper.fingerWidth;
    Vec3 mid = grasp.graspPoint + a * (len / 2.0);

    GripperBoxes gb;
    gb.fingerLow = {mid - c * ((open + th) / 2.0), {a, c, h}, {len / 2.0, th / 2.0, w / 2.0}};
    gb.fingerHigh = {mid + c * ((open + th) / 2.0), {a, c, h}, {len / 2.0, th / 2.0, w / 2.0}};
    gb.base = {grasp.graspPoint - a * (gripper.baseDepth / 2.0),
               {a, c, h},
               {gripper.baseDepth / 2.0, open / 2.0 + th, w / 2.0}};
    gb.closingRegion = {mid, {a, c, h}, {len / 2.0, open / 2.0, w / 2.0}};
    return gb;
}

std::vector<int> sampleGraspPoints(const PointCloud& objectPoints, Rng& rng) {
    std::size_t n = objectPoints.size();
    if (n == 0) throw std::invalid_argument("cannot sample grasp points from an empty cloud");
    int k = std::max(1, static_cast<int>(n / 10));
    return rng.sampleWithoutReplacement(static_cast<int>(n), k);
}

std::vector<Grasp3D> enumerateCandidates(const Vec3& surfacePoint, const Vec3& surfaceNormal,
                                         const GripperModel& gripper, int ownerObjectId) {
    gripper.validate();
    requireUnit(surfaceNormal, "surface normal must be unit length");
    Vec3 approach = -surfaceNormal;
    const double depths[4] = {-0.06, -0.04, -0.02, -0.00};
    std::vector<Grasp3D> out;
    out.reserve(36);
    for (int k = 0; k < 9; ++k) {
        double theta = degToRad(-90.0 + 20.0 * k);
        for (double d : depths) {
            Grasp3D g;
            g.graspPoint = surfacePoint + approach * d;
            g.gripperOrientation = approach;
            g.approachAngle = theta;
            g.depthOffset = d;
            g.verticality = verticality(approach);
            g.ownerObjectId = ownerObjectId;
            out.push_back(g);
        }
    }
    return out;
}

bool collisionFree(const Grasp3D& grasp, const GripperModel& gripper,
                   const std::vector<PosedMesh>& scene, int targetId) {
    GripperBoxes gb = gripperBoxes(grasp, gripper);
    for (const PosedMesh& pm : scene) {
        if (boxHitsMesh(gb.fingerLow, pm) || boxHitsMesh(gb.fingerHigh, pm) ||
            boxHitsMesh(gb.base, pm))
            return false;
        if (pm.objectId != targetId && boxHitsMesh(gb.closingRegion, pm)) return false;
    }
    return true;
}

double antipodalScore(const Grasp3D& grasp, const GripperModel& gripper, const PosedMesh& target,
                      double friction) {
    (void)friction;  // recorded with the annotation; the continuous score has no cone cut
    GripperBoxes gb = gripperBoxes(grasp, gripper);
    Vec3 c = grasp.closingAxis();
    Vec3 innerLow = gb.fingerLow.center + c * (gripper.fingerThickness / 2.0);
    Vec3 innerHigh = gb.fingerHigh.center - c * (gripper.fingerThickness / 2.0);

    Quat inv = target.pose.rotation.conjugate();
    double sum = 0.0;
    for (int side = 0; side < 2; ++side) {
        Vec3 origin = side == 0 ? innerLow : innerHigh;
        Vec3 dir = side == 0 ? c : -c;
        auto hit = target.bvh->raycast(target.pose.applyInverse(origin), inv.rotate(dir),
                                       gripper.maxOpening);
        if (!hit) return 0.0;
        Vec3 n = target.pose.rotate(target.mesh->faceNormal(hit->face));
        sum += std::max(0.0, n.dot(-dir));
    }
    return std::min(1.0, 0.5 * sum);
}

double centerScore(const Vec3& graspPoint, const Vec3& objectCentroid, double dMin, double dMax) {
    if (dMin > dMax) throw std::invalid_argument("centerScore needs dMin <= dMax");
    double d = (graspPoint - objectCentroid).norm();
    double slack = 1e-9 * std::max(1.0, dMax);
    if (d < dMin - slack || d > dMax + slack)
        throw std::invalid_argument("grasp distance falls outside [dMin, dMax]");
    if (dMax == dMin) return 1.0;
    return std::clamp((dMax - d) / (dMax - dMin), 0.0, 1.0);
}

double verticality(const Vec3& approach) {
    requireUnit(approach, "verticality needs a unit approach");
    return kPi / 2.0 - angleBetween(approach, Vec3{0.0, 0.0, -1.0});
}

std::vector<Grasp3D> filterVerticality(std::vector<Grasp3D> grasps, double threshold) {
    std::erase_if(grasps, [&](const Grasp3D& g) { return g.verticality < threshold; });
    return grasps;
}

Vec3 volumeCentroid(const TriMesh& mesh) {
    double vol6 = 0.0;
    Vec3 acc;
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(tri[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(tri[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(tri[2])];
        double v = a.dot(b.cross(c));
        vol6 += v;
        acc += (a + b + c) * v;
    }
    if (std::abs(vol6) < 1e-15) return mesh.vertexCentroid();
    return acc / (4.0 * vol6);
}

std::map<int, GraspSet> annotateGrasps(const SceneRecord& record, const ModelLibrary& lib,
                                       const PointCloud& cloud, Rng& rng,
                                       const GraspAnnotateParams& params) {
    params.gripper.validate();
    PosedScene posed = PosedScene::build(record, lib);
    uint64_t base = rng.next();

    std::map<int, GraspSet> out;
    for (const SceneObject& obj : record.objects) {
        GraspSet set;
        set.ownerObjectId = obj.objectId;
        const PosedMesh* pm = posed.find(obj.objectId);
        PointCloud pts = cloud.restrictedTo(obj.objectId);
        if (pm && !pts.empty()) {
            Rng objectRng(deriveSeed(base, static_cast<uint64_t>(obj.objectId)));
            std::vector<int> indices = sampleGraspPoints(pts, objectRng);
            Vec3 centroid = pm->pose.apply(volumeCentroid(*pm->mesh));

            std::vector<Grasp3D> retained;
            for (int i : indices) {
                Vec3 local =
                    pm->pose.applyInverse(pts.points[static_cast<std::size_t>(i)].position);
                auto cp = pm->bvh->closestPoint(local);
                Vec3 surface = pm->pose.apply(cp.point);
                Vec3 normal = pm->pose.rotate(pm->mesh->faceNormal(cp.face));
                for (Grasp3D& g :
                     enumerateCandidates(surface, normal, params.gripper, obj.objectId)) {
                    if (!collisionFree(g, params.gripper, posed.meshes(), obj.objectId)) continue;
                    g.antipodalScore = antipodalScore(g, params.gripper, *pm, params.friction);
                    retained.push_back(g);
                }
            }
            retained = filterVerticality(std::move(retained), params.verticalityThreshold);
            if (!retained.empty()) {
                // dMin/dMax describe the shipped set, so score after filtering.
                double dMin = 1e300, dMax = -1e300;
                for (const Grasp3D& g : retained) {
                    double d = (g.graspPoint - centroid).norm();
                    dMin = std::min(dMin, d);
                    dMax = std::max(dMax, d);
                }
                set.dMin = dMin;
                set.dMax = dMax;
                for (Grasp3D& g : retained)
                    g.centerScore = centerScore(g.graspPoint, centroid, dMin, dMax);
                set.grasps = std::move(retained);
            }
        }
        out.emplace(obj.objectId, std::move(set));
    }
    return out;
}

} // namespace cluttergen
