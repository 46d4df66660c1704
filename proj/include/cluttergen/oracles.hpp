#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cluttergen/geom.hpp"
#include "cluttergen/mesh.hpp"

namespace cluttergen {

struct GripperModel;
struct Grasp3D;
struct PosedMesh;
class World;

// Deliberately slow, deliberately independent reference implementations.
// They share no algorithmic code with the production paths: different
// intersection formulation, dense sampling instead of analytic overlap,
// exhaustive sweeps instead of calipers. Used by tests and `validate`.

struct OracleReport {
    int casesChecked = 0;
    std::vector<std::string> mismatches;
    bool clean() const { return mismatches.empty(); }
};

// Plane intersection + barycentric containment (vs. the production
// Moller-Trumbore), scanning every triangle of the posed mesh.
std::optional<double> oracleRayMesh(const Vec3& origin, const Vec3& direction,
                                    const TriMesh& mesh, const Pose& meshPose);

// Dense surface samples of one scene object, world frame.
struct SurfaceSamples {
    int objectId = kBackgroundId;
    std::vector<Vec3> points;
};

// Barycentric-grid samples of every mesh triangle at the given pitch;
// reusable across many grasp checks against the same scene.
std::vector<SurfaceSamples> oracleSampleScene(const std::vector<PosedMesh>& scene,
                                              double sampleSpacing = 0.004);

// True iff any densely sampled surface point of any scene mesh lies inside
// one of the gripper's solid boxes, or a non-target point sits between the
// fingers. `sampleSpacing` is the surface sampling pitch in meters.
bool oracleGraspCollides(const Grasp3D& grasp, const GripperModel& gripper,
                         const std::vector<PosedMesh>& scene, int targetId,
                         double sampleSpacing = 0.004);
bool oracleGraspCollides(const Grasp3D& grasp, const GripperModel& gripper,
                         const std::vector<SurfaceSamples>& samples, int targetId);

// Minimum-area enclosing rectangle by exhaustive 1-degree orientation sweep.
// Returns the best area found.
double oracleMinRectArea(const std::vector<Vec2>& points);

// Parent lists for scenes made only of axis-aligned resting boxes:
// B supports A iff removing B's contact patch leaves A's centroid outside the
// convex hull of its remaining supports. Throws std::invalid_argument when a
// body is not an axis-aligned box (within tolerance).
std::map<int, std::set<int>> supportOracle(const World& world);

} // namespace cluttergen

#include "cluttergen/scene.hpp"

namespace cluttergen {

// Hand-built relationship test corpus: 20+ analytic axis-aligned box scenes
// (stacks, bridges, offset towers, multi-leg decks) that the quasi-static
// support checker can analyze exactly, plus one simulated pair of wedges
// leaning against each other (mutual support; outside the checker's domain).
struct MrgCorpus {
    ModelLibrary library;
    std::vector<std::pair<std::string, SceneRecord>> boxScenes;
    SceneRecord leaningPair;  // two wedges, ids 0 and 1
};

MrgCorpus mrgCorpus();

// The named scene from corpus.boxScenes ("three_stack" has ids 0 = top,
// 1 = middle, 2 = bottom). Throws when absent.
const SceneRecord& corpusScene(const MrgCorpus& corpus, const std::string& name);

} // namespace cluttergen
