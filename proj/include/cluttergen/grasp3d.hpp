#pragma once

#include <map>
#include <vector>

#include "cluttergen/cloud.hpp"
#include "cluttergen/geom.hpp"
#include "cluttergen/mesh.hpp"
#include "cluttergen/rng.hpp"
#include "cluttergen/scene.hpp"

namespace cluttergen {

struct GripperModel {
    double maxOpening = 0.08;       // gap between the finger inner faces
    double fingerLength = 0.06;     // along the approach direction
    double fingerThickness = 0.01;  // along the closing axis
    double fingerWidth = 0.02;      // across the jaw
    double baseDepth = 0.02;        // solid block behind the fingers
    void validate() const;  // all positive; maxOpening > 2*fingerThickness
};

// A parallel-jaw grasp candidate. graspPoint is the palm-side center of the
// closing region: fingers run fingerLength further along the approach,
// the base block sits behind it. gripperOrientation is the (unit) approach
// direction pointing into the surface; approachAngle spins the jaw in the
// plane orthogonal to it.
struct Grasp3D {
    Vec3 graspPoint;
    Vec3 gripperOrientation;
    double approachAngle = 0.0;    // rad
    double antipodalScore = 0.0;   // [0,1]
    double centerScore = 0.0;      // [0,1]
    double verticality = 0.0;      // rad; elevation of the approach above horizontal
    double depthOffset = 0.0;      // m along the approach from the surface point
    int ownerObjectId = kBackgroundId;

    // Orthonormal frame derived from (gripperOrientation, approachAngle).
    Vec3 approach() const { return gripperOrientation; }
    Vec3 closingAxis() const;
    Vec3 fingerAxis() const;
};

struct GraspSet {
    int ownerObjectId = kBackgroundId;
    std::vector<Grasp3D> grasps;
    double dMin = 0.0, dMax = 0.0;  // grasp-to-centroid distance range
};

// Box with arbitrary orientation, world frame.
struct OrientedBox {
    Vec3 center;
    Vec3 axes[3];  // unit, mutually orthogonal
    Vec3 half;
    bool contains(const Vec3& p) const {
        Vec3 d = p - center;
        return std::abs(d.dot(axes[0])) <= half.x && std::abs(d.dot(axes[1])) <= half.y &&
               std::abs(d.dot(axes[2])) <= half.z;
    }
};

// The gripper's solid parts at a grasp pose, plus the open region between
// the fingers. Axis order: approach, closing, finger-width.
struct GripperBoxes {
    OrientedBox fingerLow;   // at -closing side
    OrientedBox fingerHigh;  // at +closing side
    OrientedBox base;
    OrientedBox closingRegion;
};
GripperBoxes gripperBoxes(const Grasp3D& grasp, const GripperModel& gripper);

// max(1, floor(n/10)) distinct indices into the object's points, uniform
// without replacement. Throws std::invalid_argument on an empty cloud.
std::vector<int> sampleGraspPoints(const PointCloud& objectPoints, Rng& rng);

// 9 jaw orientations (every 20 degrees over [-90, +90), the two ends being
// the same grasp by jaw symmetry) x 4 depth offsets {-0.06,-0.04,-0.02,-0.00}
// = 36 candidates. The approach is the inward surface normal. Scores are
// left at zero. Throws std::invalid_argument on a non-unit normal.
std::vector<Grasp3D> enumerateCandidates(const Vec3& surfacePoint, const Vec3& surfaceNormal,
                                         const GripperModel& gripper, int ownerObjectId);

// True iff the fingers and base touch no scene geometry and the region
// between the fingers contains nothing but the target object.
bool collisionFree(const Grasp3D& grasp, const GripperModel& gripper,
                   const std::vector<PosedMesh>& scene, int targetId);

// Cast a ray inward from each finger's inner-face center along the closing
// axis; gamma_i is the angle between the contact's outward normal and the
// axis back toward that finger. Returns the clamped cosine average
// 0.5*(max(0,cos g1) + max(0,cos g2)), or 0 when either ray misses within
// the jaw gap. `friction` is recorded for provenance; the continuous score
// does not hard-cut on the friction cone.
double antipodalScore(const Grasp3D& grasp, const GripperModel& gripper,
                      const PosedMesh& target, double friction = 0.5);

// (dMax - d) / (dMax - dMin) with d = |graspPoint - centroid|; 1.0 when the
// set is degenerate (dMax == dMin). Throws std::invalid_argument when
// dMin > dMax or d falls outside [dMin, dMax].
double centerScore(const Vec3& graspPoint, const Vec3& objectCentroid, double dMin, double dMax);

// Elevation of the approach above the horizontal plane: 90 degrees minus
// the angle to straight-down. Grasps from below come out negative.
double verticality(const Vec3& approach);

// Keeps grasps with verticality >= threshold (default 30 degrees: approach
// within 60 degrees of vertical).
std::vector<Grasp3D> filterVerticality(std::vector<Grasp3D> grasps,
                                       double threshold = degToRad(30.0));

struct GraspAnnotateParams {
    GripperModel gripper;
    double friction = 0.5;
    double verticalityThreshold = degToRad(30.0);
};

// Solid (volume) centroid of a watertight mesh, by signed tetrahedra.
Vec3 volumeCentroid(const TriMesh& mesh);

// Sample-then-filter over every object present in the cloud: sample a tenth
// of its points, enumerate 36 candidates each, drop colliding and
// low-verticality poses, score the survivors. Objects with no points or no
// survivors get an empty set. Deterministic in the rng state.
std::map<int, GraspSet> annotateGrasps(const SceneRecord& record, const ModelLibrary& lib,
                                       const PointCloud& cloud, Rng& rng,
                                       const GraspAnnotateParams& params = {});

} // namespace cluttergen
