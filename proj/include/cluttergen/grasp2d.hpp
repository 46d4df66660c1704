#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "cluttergen/camera.hpp"
#include "cluttergen/cloud.hpp"
#include "cluttergen/geom.hpp"
#include "cluttergen/grasp3d.hpp"

namespace cluttergen {

struct DegenerateGeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Oriented rectangle in pixel coordinates. alpha is the angle of the
// width axis against the image horizontal, normalized to (-pi/2, pi/2].
struct RotatedRect {
    Vec2 center;
    double width = 0.0;
    double height = 0.0;
    double alpha = 0.0;

    std::array<Vec2, 4> corners() const {
        Vec2 u{std::cos(alpha), std::sin(alpha)};
        Vec2 v{-u.y, u.x};
        Vec2 du = u * (0.5 * width), dv = v * (0.5 * height);
        return {center - du - dv, center + du - dv, center + du + dv, center - du + dv};
    }
    double area() const { return width * height; }
};

// Minimum-area enclosing rectangle of 4 points, flush with a hull edge.
// Of the two (width, height, alpha) labelings of the winner the one with
// the smaller alpha is returned; area ties also resolve to the smaller
// alpha. Throws DegenerateGeometryError when the points are collinear.
RotatedRect minAreaRect(const std::array<Vec2, 4>& points);

// A 3D grasp projected into one camera as an oriented rectangle. width
// spans the jaw opening, height the finger width.
struct Grasp2D {
    Vec2 center;              // pixels
    double width = 0.0;       // px, jaw-opening direction
    double height = 0.0;      // px, finger-width direction
    double alpha = 0.0;       // rad, width axis vs image horizontal, (-pi/2, pi/2]
    int ownerObjectId = kBackgroundId;
    int sourceGraspIndex = -1;
    bool clipped = false;     // some corner falls outside the image

    std::array<Vec2, 4> corners() const {
        return RotatedRect{center, width, height, alpha}.corners();
    }
};

enum class ProjectionStatus { Ok, RejectedCameraAngle, RejectedBehindCamera };

struct GraspProjection {
    ProjectionStatus status = ProjectionStatus::Ok;
    Grasp2D grasp;  // meaningful only when status == Ok
    bool ok() const { return status == ProjectionStatus::Ok; }
};

// Projects the fingertip edges of the two inner finger faces into the
// image and wraps their quadrilateral in its minimum-area rectangle.
// Rejected when the approach is more than 30 degrees off the camera's
// optical axis, or when any edge endpoint is at or behind the camera.
GraspProjection projectGrasp(const Grasp3D& grasp, const GripperModel& gripper,
                             const PinholeCamera& cam, double maxCameraAngle = degToRad(30.0));

// Every grasp of every set through one camera, rejects skipped.
// sourceGraspIndex is the grasp's index within its owner set.
std::vector<Grasp2D> projectScene(const std::map<int, GraspSet>& sets,
                                  const GripperModel& gripper, const PinholeCamera& cam,
                                  double maxCameraAngle = degToRad(30.0));

} // namespace cluttergen
