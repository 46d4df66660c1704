#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cluttergen/grasp3d.hpp"
#include "cluttergen/mrg.hpp"
#include "cluttergen/scene.hpp"
#include "cluttergen/sensor.hpp"

namespace cluttergen {

// Max IoU between boxes[i] and every other box of the same view; 0.0 when
// the view holds a single box. Areas use exclusive edge lengths
// (xMax - xMin), the float-box convention, so a box one pixel wide has zero
// area. Throws std::invalid_argument on an out-of-range index, an empty
// list, or any zero-area box in the list.
double overlapIoU(const std::vector<BBox2D>& boxes, std::size_t i);

// Smallest power-of-two X >= 32 whose square holds the box's pixel count
// (inclusive widths: xMax - xMin + 1). Counts past 512*512 land in the
// overflow bucket, reported as ">512".
inline constexpr int kBucketOverflow = 1024;
int sizeBucket(const BBox2D& box);
std::string bucketLabel(int bucket);

inline constexpr int kIouBins = 10;          // width 0.1 over [0, 1]
inline constexpr int kAntipodalBins = 20;    // width 0.05 over [0, 1]
inline constexpr int kVerticalityBins = 18;  // width 10 deg over [-90, 90]

struct RelationshipCounts {
    std::int64_t none = 0;
    std::int64_t parent = 0;
    std::int64_t child = 0;
    std::int64_t bidirectional = 0;
    std::int64_t total() const { return none + parent + child + bidirectional; }
};

// Aggregate over any number of scenes. Histograms each sum to their own
// population: objectCountHistogram to sceneCount, categoryHistogram to the
// object total, bboxSizeHistogram to the box total, overlapHistogram to the
// positive-area box total, antipodal/verticality to the 3D grasp total.
struct DatasetSummary {
    int sceneCount = 0;
    std::map<int, std::int64_t> objectCountHistogram;
    std::map<std::string, std::int64_t> categoryHistogram;
    std::map<int, std::int64_t> bboxSizeHistogram;  // keyed by sizeBucket()
    std::array<std::int64_t, kIouBins> overlapHistogram{};
    RelationshipCounts relationshipCounts;
    std::array<std::int64_t, kAntipodalBins> antipodalHistogram{};
    std::array<std::int64_t, kVerticalityBins> verticalityHistogram{};
    std::vector<std::string> fileErrors;

    // Folds one scene's annotations in. Zero-area boxes are skipped by the
    // overlap histogram (IoU over them is undefined) but still counted by
    // the size histogram.
    void addScene(const SceneRecord& record, const Mrg& mrg,
                  const std::map<int, GraspSet>& grasps,
                  const std::vector<std::vector<BBox2D>>& boxesPerView);

    // Commutative fold of two summaries.
    void merge(const DatasetSummary& other);
};

// Reads every scene bundle under datasetDir (subdirectories holding a
// scene.json) in sorted order and aggregates them. A malformed or missing
// file is recorded in fileErrors and the scene is skipped; aggregation
// continues. Throws std::runtime_error only when datasetDir itself is
// unusable.
DatasetSummary summarize(const std::string& datasetDir);

// Writes summary.json plus one CSV per histogram into outDir (created if
// absent): object_counts.csv, categories.csv, bbox_sizes.csv, overlap.csv,
// relationships.csv, antipodal.csv, verticality.csv.
void writeSummary(const DatasetSummary& summary, const std::string& outDir);

} // namespace cluttergen
