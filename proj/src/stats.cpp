#include "cluttergen/stats.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cluttergen/serialize.hpp"

namespace cluttergen {
namespace {

std::int64_t exclusiveArea(const BBox2D& b) {
    std::int64_t w = b.xMax - b.xMin;
    std::int64_t h = b.yMax - b.yMin;
    return w <= 0 || h <= 0 ? 0 : w * h;
}

std::int64_t pixelCount(const BBox2D& b) {
    return static_cast<std::int64_t>(b.xMax - b.xMin + 1) *
           static_cast<std::int64_t>(b.yMax - b.yMin + 1);
}

int clampBin(double value, int bins) {
    int idx = static_cast<int>(value);
    return std::clamp(idx, 0, bins - 1);
}

int iouBin(double v) { return clampBin(v * kIouBins, kIouBins); }
int antipodalBin(double v) { return clampBin(v * kAntipodalBins, kAntipodalBins); }
int verticalityBin(double rad) {
    return clampBin((radToDeg(rad) + 90.0) / 10.0, kVerticalityBins);
}

} // namespace

double overlapIoU(const std::vector<BBox2D>& boxes, std::size_t i) {
    if (boxes.empty()) throw std::invalid_argument("overlapIoU needs at least one box");
    if (i >= boxes.size()) throw std::invalid_argument("overlapIoU index out of range");
    for (const BBox2D& b : boxes) {
        if (exclusiveArea(b) <= 0)
            throw std::invalid_argument("overlapIoU: zero-area box (object " +
                                        std::to_string(b.objectId) + ")");
    }
    const BBox2D& a = boxes[i];
    double best = 0.0;
    for (std::size_t j = 0; j < boxes.size(); ++j) {
        if (j == i) continue;
        const BBox2D& b = boxes[j];
        std::int64_t ix = std::min(a.xMax, b.xMax) - std::max(a.xMin, b.xMin);
        std::int64_t iy = std::min(a.yMax, b.yMax) - std::max(a.yMin, b.yMin);
        if (ix <= 0 || iy <= 0) continue;
        double inter = static_cast<double>(ix * iy);
        double uni = static_cast<double>(exclusiveArea(a) + exclusiveArea(b)) - inter;
        best = std::max(best, inter / uni);
    }
    return best;
}

int sizeBucket(const BBox2D& box) {
    if (box.xMax < box.xMin || box.yMax < box.yMin)
        throw std::invalid_argument("sizeBucket: inverted box");
    std::int64_t count = pixelCount(box);
    for (int x = 32; x <= 512; x *= 2) {
        if (count <= static_cast<std::int64_t>(x) * x) return x;
    }
    return kBucketOverflow;
}

std::string bucketLabel(int bucket) {
    if (bucket == kBucketOverflow) return ">512";
    return std::to_string(bucket);
}

void DatasetSummary::addScene(const SceneRecord& record, const Mrg& mrg,
                              const std::map<int, GraspSet>& grasps,
                              const std::vector<std::vector<BBox2D>>& boxesPerView) {
    ++sceneCount;
    ++objectCountHistogram[static_cast<int>(record.objects.size())];
    for (const SceneObject& o : record.objects) ++categoryHistogram[o.category];

    for (const auto& [i, j, label] : mrg.matrix()) {
        (void)i;
        (void)j;
        switch (label) {
            case RelationLabel::None: ++relationshipCounts.none; break;
            case RelationLabel::Parent: ++relationshipCounts.parent; break;
            case RelationLabel::Child: ++relationshipCounts.child; break;
            case RelationLabel::Bidirectional: ++relationshipCounts.bidirectional; break;
        }
    }

    for (const auto& [id, set] : grasps) {
        (void)id;
        for (const Grasp3D& g : set.grasps) {
            ++antipodalHistogram[antipodalBin(g.antipodalScore)];
            ++verticalityHistogram[verticalityBin(g.verticality)];
        }
    }

    for (const std::vector<BBox2D>& view : boxesPerView) {
        for (const BBox2D& b : view) ++bboxSizeHistogram[sizeBucket(b)];
        std::vector<BBox2D> positive;
        for (const BBox2D& b : view)
            if (exclusiveArea(b) > 0) positive.push_back(b);
        for (std::size_t i = 0; i < positive.size(); ++i)
            ++overlapHistogram[iouBin(overlapIoU(positive, i))];
    }
}

void DatasetSummary::merge(const DatasetSummary& other) {
    sceneCount += other.sceneCount;
    for (const auto& [k, v] : other.objectCountHistogram) objectCountHistogram[k] += v;
    for (const auto& [k, v] : other.categoryHistogram) categoryHistogram[k] += v;
    for (const auto& [k, v] : other.bboxSizeHistogram) bboxSizeHistogram[k] += v;
    for (int i = 0; i < kIouBins; ++i) overlapHistogram[i] += other.overlapHistogram[i];
    relationshipCounts.none += other.relationshipCounts.none;
    relationshipCounts.parent += other.relationshipCounts.parent;
    relationshipCounts.child += other.relationshipCounts.child;
    relationshipCounts.bidirectional += other.relationshipCounts.bidirectional;
    for (int i = 0; i < kAntipodalBins; ++i) antipodalHistogram[i] += other.antipodalHistogram[i];
    for (int i = 0; i < kVerticalityBins; ++i)
        verticalityHistogram[i] += other.verticalityHistogram[i];
    fileErrors.insert(fileErrors.end(), other.fileErrors.begin(), other.fileErrors.end());
}

DatasetSummary summarize(const std::string& datasetDir) {
    namespace fs = std::filesystem;
    fs::path root(datasetDir);
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw std::runtime_error("not a directory: " + datasetDir);

    std::vector<fs::path> sceneDirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory() && fs::exists(entry.path() / "scene.json"))
            sceneDirs.push_back(entry.path());
    }
    std::sort(sceneDirs.begin(), sceneDirs.end());

    DatasetSummary summary;
    for (const fs::path& dir : sceneDirs) {
        std::string name = dir.filename().string();
        SceneRecord record;
        try {
            record = sceneFromJson(readTextFile((dir / "scene.json").string()));
        } catch (const std::exception& e) {
            summary.fileErrors.push_back(name + "/scene.json: " + e.what());
            continue;  // nothing else in the bundle can be attributed
        }
        Mrg mrg;
        try {
            mrg = mrgFromJson(readTextFile((dir / "mrg.json").string()));
        } catch (const std::exception& e) {
            summary.fileErrors.push_back(name + "/mrg.json: " + e.what());
        }
        std::map<int, GraspSet> grasps;
        try {
            grasps = grasps3dFromJson(readTextFile((dir / "grasps3d.json").string()));
        } catch (const std::exception& e) {
            summary.fileErrors.push_back(name + "/grasps3d.json: " + e.what());
        }
        std::vector<std::vector<BBox2D>> boxesPerView;
        for (std::size_t k = 0; k < record.cameraRig.size(); ++k) {
            std::string file = "bboxes_v" + std::to_string(k) + ".json";
            try {
                boxesPerView.push_back(bboxesFromJson(readTextFile((dir / file).string())));
            } catch (const std::exception& e) {
                summary.fileErrors.push_back(name + "/" + file + ": " + e.what());
            }
        }
        summary.addScene(record, mrg, grasps, boxesPerView);
    }
    return summary;
}

namespace {

void writeCsv(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
}

} // namespace

void writeSummary(const DatasetSummary& summary, const std::string& outDir) {
    namespace fs = std::filesystem;
    fs::path root(outDir);
    fs::create_directories(root);

    std::ostringstream csv;
    csv << "objects,scenes\n";
    for (const auto& [k, v] : summary.objectCountHistogram) csv << k << "," << v << "\n";
    writeCsv(root / "object_counts.csv", csv.str());

    csv.str("");
    csv << "category,objects\n";
    for (const auto& [k, v] : summary.categoryHistogram) csv << k << "," << v << "\n";
    writeCsv(root / "categories.csv", csv.str());

    csv.str("");
    csv << "bucket,boxes\n";
    for (const auto& [k, v] : summary.bboxSizeHistogram) csv << bucketLabel(k) << "," << v << "\n";
    writeCsv(root / "bbox_sizes.csv", csv.str());

    csv.str("");
    csv << "iouLow,iouHigh,boxes\n";
    for (int i = 0; i < kIouBins; ++i) {
        csv << i / 10.0 << "," << (i + 1) / 10.0 << "," << summary.overlapHistogram[i] << "\n";
    }
    writeCsv(root / "overlap.csv", csv.str());

    csv.str("");
    csv << "class,pairs\n";
    csv << "none," << summary.relationshipCounts.none << "\n";
    csv << "parent," << summary.relationshipCounts.parent << "\n";
    csv << "child," << summary.relationshipCounts.child << "\n";
    csv << "bidirectional," << summary.relationshipCounts.bidirectional << "\n";
    writeCsv(root / "relationships.csv", csv.str());

    csv.str("");
    csv << "scoreLow,scoreHigh,grasps\n";
    for (int i = 0; i < kAntipodalBins; ++i) {
        csv << i * 0.05 << "," << (i + 1) * 0.05 << "," << summary.antipodalHistogram[i] << "\n";
    }
    writeCsv(root / "antipodal.csv", csv.str());

    csv.str("");
    csv << "degLow,degHigh,grasps\n";
    for (int i = 0; i < kVerticalityBins; ++i) {
        csv << i * 10 - 90 << "," << (i + 1) * 10 - 90 << "," << summary.verticalityHistogram[i]
            << "\n";
    }
    writeCsv(root / "verticality.csv", csv.str());

    nlohmann::json doc;
    doc["schemaVersion"] = kSchemaVersion;
    doc["sceneCount"] = summary.sceneCount;
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [k, v] : summary.objectCountHistogram) counts[std::to_string(k)] = v;
    doc["objectCountHistogram"] = counts;
    doc["categoryHistogram"] = summary.categoryHistogram;
    nlohmann::json buckets = nlohmann::json::object();
    for (const auto& [k, v] : summary.bboxSizeHistogram) buckets[bucketLabel(k)] = v;
    doc["bboxSizeHistogram"] = buckets;
    doc["overlapHistogram"] = summary.overlapHistogram;
    doc["relationshipCounts"] =
        nlohmann::json{{"none", summary.relationshipCounts.none},
                       {"parent", summary.relationshipCounts.parent},
                       {"child", summary.relationshipCounts.child},
                       {"bidirectional", summary.relationshipCounts.bidirectional}};
    doc["antipodalHistogram"] = summary.antipodalHistogram;
    doc["verticalityHistogram"] = summary.verticalityHistogram;
    doc["fileErrors"] = summary.fileErrors;
    writeTextFile((root / "summary.json").string(), doc.dump(2) + "\n");
}

} // namespace cluttergen
