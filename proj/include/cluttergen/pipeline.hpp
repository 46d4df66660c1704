#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cluttergen/grasp3d.hpp"
#include "cluttergen/mrg.hpp"
#include "cluttergen/scene.hpp"
#include "cluttergen/sensor.hpp"
#include "cluttergen/stats.hpp"

namespace cluttergen {

// Everything the batch generator needs; loadable from a key=value file and
// overridable by command-line flags.
struct PipelineConfig {
    std::string modelLibraryPath;  // empty = built-in procedural library
    std::string outputDir;
    int sceneCount = 1;
    int objectCountMin = 5;
    int objectCountMax = 10;
    std::uint64_t seed = 0;
    SceneGenParams gen;            // table, drop, settle, camera rig
    GripperModel gripper;
    double friction = 0.5;
    double verticalityThreshold = degToRad(30.0);
    MrgConfig mrg;
    int cloudCapPerObject = 3000;  // grasp-sampling cloud budget per object
    bool exportClouds = true;
    bool exportImages = true;
    bool exportGrasps2d = true;
    int workers = 0;               // 0 = hardware concurrency

    void validate() const;  // throws std::invalid_argument
};

// Reads a key=value file ('#' comments, blank lines ignored). Unknown keys,
// bad numbers, and unreadable files throw std::invalid_argument or
// std::runtime_error. See applyConfigEntry for the key list.
PipelineConfig loadConfig(const std::string& path);

// Applies one key=value pair; shared by the file parser and CLI flags.
void applyConfigEntry(PipelineConfig& config, const std::string& key, const std::string& value);

// If dir is relative and CLUTTERGEN_OUTPUT_ROOT is set, prefixes it.
std::string resolveOutputDir(const std::string& dir);

// All nine view clouds concatenated in view order.
PointCloud mergeViewClouds(const SceneCapture& capture);

// Per-object uniform downsample to at most maxPerObject points, preserving
// the original point order; deterministic in the rng state.
PointCloud capPerObject(const PointCloud& cloud, int maxPerObject, Rng& rng);

struct SceneOutcome {
    int index = 0;
    std::string dir;      // relative to the dataset root
    std::string sceneId;  // empty when generation failed early
    std::uint64_t seed = 0;
    int objectCount = 0;
    bool ok = false;
    std::string error;
};

struct GenerateReport {
    std::string outputDir;
    std::vector<SceneOutcome> outcomes;  // indexed by scene number
    int succeeded = 0;
    int failed = 0;
};

// Generates config.sceneCount scenes in parallel, one bundle directory
// each (scene.json, mrg.json, grasps3d.json, per-view boxes/grasps/images/
// clouds), then writes manifest.json. Scene i depends only on
// (config, deriveSeed(config.seed, i)), so reruns are byte-identical and
// failures never abort the batch. Throws on an unusable output directory
// or model library.
GenerateReport cmdGenerate(const PipelineConfig& config);

struct ValidationIssue {
    std::string scene;  // bundle directory name, empty for dataset-level
    std::string what;
};

struct ValidateReport {
    int scenesChecked = 0;
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Re-checks a generated dataset against the stored annotations: record
// integrity, relationship-graph consistency, boxes vs segmentation, 2D
// grasps vs reprojection, cloud/pixel agreement, and a per-scene sample of
// 3D grasps against the dense-sampling collision oracle.
ValidateReport cmdValidate(const std::string& datasetDir,
                           const std::string& modelLibraryPath = "");

// summarize() + writeSummary() into outDir; returns the summary.
DatasetSummary cmdStats(const std::string& datasetDir, const std::string& outDir);

// Re-renders one scene bundle from its scene.json: rewrites images, clouds,
// and per-view boxes (but not the grasp files).
void cmdRender(const std::string& sceneDir, const std::string& modelLibraryPath = "");

// Re-extracts the relationship graph from scene.json and rewrites mrg.json.
Mrg cmdMrg(const std::string& sceneDir, const std::string& modelLibraryPath = "",
           const MrgConfig& cfg = {});

} // namespace cluttergen
