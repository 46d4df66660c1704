#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cluttergen/camera.hpp"
#include "cluttergen/geom.hpp"
#include "cluttergen/mesh.hpp"
#include "cluttergen/rng.hpp"
#include "cluttergen/sim.hpp"

namespace cluttergen {

enum class Split { SeenTrain, SeenVal, SeenTest, UnseenVal, UnseenTest };

std::string splitToString(Split s);
Split splitFromString(const std::string& s);  // throws on unknown tag

struct ModelEntry {
    std::string modelId;
    std::string category;
    TriMesh mesh;
    Split split = Split::SeenTrain;
};

class ModelLibrary {
public:
    void add(ModelEntry entry);  // throws on duplicate modelId or invalid mesh
    const ModelEntry* find(const std::string& modelId) const;
    const std::vector<ModelEntry>& entries() const { return entries_; }
    std::vector<const ModelEntry*> withSplit(Split s) const;
    bool empty() const { return entries_.empty(); }

    // Checks that the unseen-val and unseen-test category sets are disjoint.
    void validate() const;

    // Procedural shapes (boxes, slabs, cylinders, L-prisms, wedges, spheres)
    // covering all five splits; self-contained default library.
    static ModelLibrary builtin();

    // Reads <dir>/library.json: {"schemaVersion":1, "models":[{"modelId",
    // "category", "file", "split"}]} with mesh files relative to dir.
    static ModelLibrary loadFromDir(const std::string& dir);

private:
    std::vector<ModelEntry> entries_;
};

struct SceneObject {
    int objectId = 0;
    std::string modelId;
    std::string category;
    double scale = 1.0;  // applied to the library mesh
    Pose pose;
    double linearDamping = 1.0;
    double angularDamping = 1.0;
    double mass = 0.0;  // kg, density 1000 times scaled hull volume
};

struct SceneMetadata {
    std::string backgroundTag = "plain-gray";
    int lightCount = 1;  // recorded only; rendering ignores it
};

struct CameraRigParams {
    double height = 0.8;   // m above the table plane
    double spacing = 0.3;  // m between adjacent lattice points
    double fx = 250.0, fy = 250.0, cx = 160.0, cy = 120.0;
    int imageWidth = 320, imageHeight = 240;
};

struct SceneRecord {
    std::string sceneId;
    std::uint64_t seed = 0;
    double tableHalfX = 0.5, tableHalfY = 0.5;
    std::vector<SceneObject> objects;
    std::vector<PinholeCamera> cameraRig;  // 9 cameras, row-major lattice
    SceneMetadata metadata;

    // Structural invariants: object count in [1,20], unique non-negative
    // ids, resolvable models, scaled longest extent in [0.08, 0.20] m,
    // damping in [1, 1.5], 9 valid cameras at one height, lightCount 1-4.
    void validate(const ModelLibrary& lib) const;
};

struct EmptySceneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnresolvedModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform target size in [0.08, 0.20] m divided by the mesh's longest
// bounding-box side. Throws on zero-extent meshes.
double normalizeScale(const TriMesh& mesh, Rng& rng);

// 9 cameras on the 3x3 lattice {-spacing,0,spacing}^2 offset from center,
// all at center.z + height, each looking at center. Row-major order; the
// middle entry (index 4) sits directly above center.
std::vector<PinholeCamera> buildCameraRig(const Vec3& center, const CameraRigParams& p);

struct SceneGenParams {
    double tableHalfX = 0.5, tableHalfY = 0.5;
    double dropClearance = 0.25;     // m of free fall above the stack top
    double footprintFraction = 0.6;  // drop positions cover this central part
    int settleStepsPerDrop = 3000;
    StillTolerance still;
    CameraRigParams rig;
};

// Samples requestedCount models (with replacement), drops them one by one,
// settles after each drop, prunes unstable bodies, and emits the record.
// Deterministic in (lib, requestedCount, seed). Throws EmptySceneError when
// nothing survives.
SceneRecord generateScene(const ModelLibrary& lib, int requestedCount, std::uint64_t seed,
                          const SceneGenParams& params = {});

// World with every recorded body at its recorded pose and zero velocities.
World restoreScene(const SceneRecord& record, const ModelLibrary& lib);

// Scaled, world-posed meshes for every object in a record, each with a
// query acceleration structure. The PosedMesh views point into storage
// owned here and stay valid across moves of the PosedScene.
class PosedScene {
public:
    static PosedScene build(const SceneRecord& record, const ModelLibrary& lib);

    const std::vector<PosedMesh>& meshes() const { return meshes_; }
    const PosedMesh* find(int objectId) const;

private:
    std::vector<std::unique_ptr<TriMesh>> meshStore_;
    std::vector<std::unique_ptr<MeshBvh>> bvhStore_;
    std::vector<PosedMesh> meshes_;
};

// Copy of base with object poses refreshed from the world's bodies.
SceneRecord exportRecord(const World& world, const SceneRecord& base);

} // namespace cluttergen
