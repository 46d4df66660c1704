#include "cluttergen/grasp2d.hpp"

#include <algorithm>
#include <cmath>

namespace cluttergen {

namespace {

double normalizeHalfTurn(double a) {
    while (a > kPi / 2.0) a -= kPi;
    while (a <= -kPi / 2.0) a += kPi;
    return a;
}

// Monotone chain; strict turns, so collinear inputs collapse to 2 points.
std::vector<Vec2> convexHull2(std::array<Vec2, 4> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    auto* last = std::unique(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x == b.x && a.y == b.y;
    });
    std::vector<Vec2> sorted(pts.begin(), last);

    std::vector<Vec2> hull;
    auto extend = [&](const Vec2& p) {
        while (hull.size() >= 2 &&
               (hull.back() - hull[hull.size() - 2]).cross(p - hull[hull.size() - 2]) <= 0.0)
            hull.pop_back();
        hull.push_back(p);
    };
    for (const Vec2& p : sorted) extend(p);
    std::size_t lower = hull.size() + 1;
    for (auto it = sorted.rbegin() + 1; it != sorted.rend(); ++it) {
        const Vec2& p = *it;
        while (hull.size() >= lower &&
               (hull.back() - hull[hull.size() - 2]).cross(p - hull[hull.size() - 2]) <= 0.0)
            hull.pop_back();
        hull.push_back(p);
    }
    if (!hull.empty()) hull.pop_back();  // first point repeated
    return hull;
}

} // namespace

RotatedRect minAreaRect(const std::array<Vec2, 4>& points) {
    std::vector<Vec2> hull = convexHull2(points);
    if (hull.size() < 3) throw DegenerateGeometryError("minAreaRect: points are collinear");

    std::vector<RotatedRect> candidates;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        Vec2 e = hull[(i + 1) % hull.size()] - hull[i];
        Vec2 u = e / e.norm();
        Vec2 v{-u.y, u.x};
        double uLo = 1e300, uHi = -1e300, vLo = 1e300, vHi = -1e300;
        for (const Vec2& p : hull) {
            uLo = std::min(uLo, p.dot(u));
            uHi = std::max(uHi, p.dot(u));
            vLo = std::min(vLo, p.dot(v));
            vHi = std::max(vHi, p.dot(v));
        }
        Vec2 center = u * (0.5 * (uLo + uHi)) + v * (0.5 * (vLo + vHi));
        double du = uHi - uLo, dv = vHi - vLo;
        double au = normalizeHalfTurn(std::atan2(u.y, u.x));
        candidates.push_back({center, du, dv, au});
        candidates.push_back({center, dv, du, normalizeHalfTurn(au + kPi / 2.0)});
    }

    double minArea = 1e300;
    for (const RotatedRect& r : candidates) minArea = std::min(minArea, r.area());
    const RotatedRect* best = nullptr;
    for (const RotatedRect& r : candidates) {
        if (r.area() > minArea * (1.0 + 1e-9)) continue;
        if (!best || r.alpha < best->alpha) best = &r;
    }
    return *best;
}

GraspProjection projectGrasp(const Grasp3D& grasp, const GripperModel& gripper,
                             const PinholeCamera& cam, double maxCameraAngle) {
    gripper.validate();
    if (angleBetween(grasp.approach(), cam.opticalAxisWorld()) > maxCameraAngle)
        return {ProjectionStatus::RejectedCameraAngle, {}};

    Vec3 a = grasp.approach();
    Vec3 c = grasp.closingAxis();
    Vec3 h = grasp.fingerAxis();
    Vec3 tip = grasp.graspPoint + a * gripper.fingerLength;
    Vec3 gap = c * (0.5 * gripper.maxOpening);
    Vec3 wing = h * (0.5 * gripper.fingerWidth);
    std::array<Vec3, 4> ends = {tip + gap + wing, tip + gap - wing,
                                tip - gap + wing, tip - gap - wing};

    std::array<Vec2, 4> px;
    try {
        for (int i = 0; i < 4; ++i) px[i] = projectPoint(cam, ends[i]).pixel;
    } catch (const BehindCameraError&) {
        return {ProjectionStatus::RejectedBehindCamera, {}};
    }

    RotatedRect rect = minAreaRect(px);
    Vec2 jaw = (px[0] + px[1]) * 0.5 - (px[2] + px[3]) * 0.5;
    Vec2 u{std::cos(rect.alpha), std::sin(rect.alpha)};
    Vec2 v{-u.y, u.x};

    Grasp2D out;
    out.center = rect.center;
    if (std::abs(jaw.dot(u)) >= std::abs(jaw.dot(v))) {
        out.width = rect.width;
        out.height = rect.height;
        out.alpha = rect.alpha;
    } else {
        out.width = rect.height;
        out.height = rect.width;
        out.alpha = normalizeHalfTurn(rect.alpha + kPi / 2.0);
    }
    out.ownerObjectId = grasp.ownerObjectId;
    for (const Vec2& q : out.corners()) {
        if (q.x < 0.0 || q.x > cam.width - 1.0 || q.y < 0.0 || q.y > cam.height - 1.0) {
            out.clipped = true;
            break;
        }
    }
    return {ProjectionStatus::Ok, out};
}

std::vector<Grasp2D> projectScene(const std::map<int, GraspSet>& sets,
                                  const GripperModel& gripper, const PinholeCamera& cam,
                                  double maxCameraAngle) {
    std::vector<Grasp2D> out;
    for (const auto& [objectId, set] : sets) {
        for (std::size_t i = 0; i < set.grasps.size(); ++i) {
            GraspProjection proj = projectGrasp(set.grasps[i], gripper, cam, maxCameraAngle);
            if (!proj.ok()) continue;
            proj.grasp.sourceGraspIndex = static_cast<int>(i);
            out.push_back(proj.grasp);
        }
    }
    return out;
}

} // namespace cluttergen
