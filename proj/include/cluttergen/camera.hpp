#pragma once

#include <stdexcept>

#include "cluttergen/geom.hpp"

namespace cluttergen {

// Thrown by projectPoint when the target is at or behind the camera plane.
struct BehindCameraError : std::domain_error {
    BehindCameraError() : std::domain_error("point at or behind camera plane") {}
};

// Camera frame: +Z forward (optical axis), +X right, +Y down in the image.
// `pose` maps camera-frame points to world frame.
struct PinholeCamera {
    double fx = 0.0, fy = 0.0;  // focal lengths, pixels
    double cx = 0.0, cy = 0.0;  // principal point, pixels
    int width = 0, height = 0;
    Pose pose;

    void validate() const {
        if (fx <= 0.0 || fy <= 0.0) throw std::invalid_argument("focal lengths must be positive");
        if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height)
            throw std::invalid_argument("principal point outside image");
    }

    Vec3 opticalAxisWorld() const { return pose.rotate(Vec3::unitZ()); }
};

struct PixelDepth {
    Vec2 pixel;
    double depth = 0.0;  // camera-frame Z, meters
};

inline PixelDepth projectPoint(const PinholeCamera& cam, const Vec3& worldPoint) {
    Vec3 p = cam.pose.applyInverse(worldPoint);
    if (p.z <= 0.0) throw BehindCameraError();
    return {{cam.fx * p.x / p.z + cam.cx, cam.fy * p.y / p.z + cam.cy}, p.z};
}

inline Vec3 backprojectPixel(const PinholeCamera& cam, const Vec2& pixel, double depth) {
    if (depth <= 0.0) throw std::invalid_argument("depth must be positive");
    Vec3 p{(pixel.x - cam.cx) / cam.fx * depth, (pixel.y - cam.cy) / cam.fy * depth, depth};
    return cam.pose.apply(p);
}

// Camera-to-world pose with the optical axis aimed from eye to target. The
// image x axis is chosen horizontal in the world (stable for downward views).
inline Pose lookAtPose(const Vec3& eye, const Vec3& target) {
    Vec3 f = (target - eye).normalized();
    Vec3 upHint = Vec3::unitY();
    if (f.cross(upHint).norm() <= 1e-9) upHint = Vec3::unitZ();
    Vec3 right = f.cross(upHint).normalized();
    Vec3 down = f.cross(right);
    return {Quat::fromMatrix(Mat3::fromColumns(right, down, f)), eye};
}

} // namespace cluttergen
