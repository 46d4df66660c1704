#include "cluttergen/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <thread>

#include "cluttergen/grasp2d.hpp"
#include "cluttergen/image_io.hpp"
#include "cluttergen/mesh_io.hpp"
#include "cluttergen/oracles.hpp"
#include "cluttergen/serialize.hpp"

namespace cluttergen {

namespace fs = std::filesystem;

namespace {

double parseDouble(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double d = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
    }
}

int parseInt(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        int i = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad integer '" + value + "'");
    }
}

std::uint64_t parseU64(const std::string& key, const std::string& value) {
    try {
        if (value.empty() || value[0] < '0' || value[0] > '9') throw std::invalid_argument(value);
        std::size_t used = 0;
        unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad integer '" + value + "'");
    }
}

bool parseBool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw std::invalid_argument("config key '" + key + "': bad boolean '" + value + "'");
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string sceneDirName(int index) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "scene_%06d", index);
    return buf;
}

} // namespace

void PipelineConfig::validate() const {
    if (sceneCount < 1) throw std::invalid_argument("scene count must be at least 1");
    if (objectCountMin < 1 || objectCountMax > 20 || objectCountMin > objectCountMax)
        throw std::invalid_argument("object count range must lie within [1, 20]");
    if (cloudCapPerObject < 10)
        throw std::invalid_argument("cloud cap must allow at least 10 points per object");
    if (workers < 0) throw std::invalid_argument("worker count cannot be negative");
    if (friction <= 0.0) throw std::invalid_argument("friction must be positive");
    if (verticalityThreshold < 0.0 || verticalityThreshold > kPi / 2.0)
        throw std::invalid_argument("verticality threshold must lie in [0, 90] degrees");
    gripper.validate();
    mrg.validate();
}

void applyConfigEntry(PipelineConfig& c, const std::string& key, const std::string& value) {
    if (key == "library") c.modelLibraryPath = value;
    else if (key == "output") c.outputDir = value;
    else if (key == "scenes") c.sceneCount = parseInt(key, value);
    else if (key == "objects_min") c.objectCountMin = parseInt(key, value);
    else if (key == "objects_max") c.objectCountMax = parseInt(key, value);
    else if (key == "seed") c.seed = parseU64(key, value);
    else if (key == "workers") c.workers = parseInt(key, value);
    else if (key == "cloud_cap") c.cloudCapPerObject = parseInt(key, value);
    else if (key == "table_half_x") c.gen.tableHalfX = parseDouble(key, value);
    else if (key == "table_half_y") c.gen.tableHalfY = parseDouble(key, value);
    else if (key == "drop_clearance") c.gen.dropClearance = parseDouble(key, value);
    else if (key == "footprint_fraction") c.gen.footprintFraction = parseDouble(key, value);
    else if (key == "settle_steps") c.gen.settleStepsPerDrop = parseInt(key, value);
    else if (key == "rig_height") c.gen.rig.height = parseDouble(key, value);
    else if (key == "rig_spacing") c.gen.rig.spacing = parseDouble(key, value);
    else if (key == "fx") c.gen.rig.fx = parseDouble(key, value);
    else if (key == "fy") c.gen.rig.fy = parseDouble(key, value);
    else if (key == "cx") c.gen.rig.cx = parseDouble(key, value);
    else if (key == "cy") c.gen.rig.cy = parseDouble(key, value);
    else if (key == "image_width") c.gen.rig.imageWidth = parseInt(key, value);
    else if (key == "image_height") c.gen.rig.imageHeight = parseInt(key, value);
    else if (key == "gripper_max_opening") c.gripper.maxOpening = parseDouble(key, value);
    else if (key == "gripper_finger_length") c.gripper.fingerLength = parseDouble(key, value);
    else if (key == "gripper_finger_thickness") c.gripper.fingerThickness = parseDouble(key, value);
    else if (key == "gripper_finger_width") c.gripper.fingerWidth = parseDouble(key, value);
    else if (key == "gripper_base_depth") c.gripper.baseDepth = parseDouble(key, value);
    else if (key == "friction") c.friction = parseDouble(key, value);
    else if (key == "verticality_threshold_deg")
        c.verticalityThreshold = degToRad(parseDouble(key, value));
    else if (key == "mrg_epsilon_translation") c.mrg.epsilonTranslation = parseDouble(key, value);
    else if (key == "mrg_epsilon_rotation_deg")
        c.mrg.epsilonRotation = degToRad(parseDouble(key, value));
    else if (key == "mrg_steps") c.mrg.perturbSteps = parseInt(key, value);
    else if (key == "export_clouds") c.exportClouds = parseBool(key, value);
    else if (key == "export_images") c.exportImages = parseBool(key, value);
    else if (key == "export_grasps2d") c.exportGrasps2d = parseBool(key, value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

PipelineConfig loadConfig(const std::string& path) {
    std::string text = readTextFile(path);
    PipelineConfig config;
    std::size_t lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++lineNo;
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineNo) +
                                        ": expected key = value");
        applyConfigEntry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

std::string resolveOutputDir(const std::string& dir) {
    const char* root = std::getenv("CLUTTERGEN_OUTPUT_ROOT");
    if (!root || *root == '\0' || dir.empty()) return dir;
    fs::path p(dir);
    if (p.is_absolute()) return dir;
    return (fs::path(root) / p).string();
}

PointCloud mergeViewClouds(const SceneCapture& capture) {
    PointCloud merged;
    for (const ViewCapture& view : capture.views)
        merged.points.insert(merged.points.end(), view.cloud.points.begin(),
                             view.cloud.points.end());
    return merged;
}

PointCloud capPerObject(const PointCloud& cloud, int maxPerObject, Rng& rng) {
    if (maxPerObject < 1) throw std::invalid_argument("cap must be positive");
    std::map<int, std::vector<std::size_t>> byObject;
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        byObject[cloud.points[i].objectId].push_back(i);
    PointCloud out;
    for (auto& [id, indices] : byObject) {
        (void)id;
        if (static_cast<int>(indices.size()) > maxPerObject) {
            std::vector<int> keep =
                rng.sampleWithoutReplacement(static_cast<int>(indices.size()), maxPerObject);
            std::sort(keep.begin(), keep.end());
            for (int k : keep) out.points.push_back(cloud.points[indices[k]]);
        } else {
            for (std::size_t k : indices) out.points.push_back(cloud.points[k]);
        }
    }
    return out;
}

namespace {

ModelLibrary openLibrary(const std::string& path) {
    return path.empty() ? ModelLibrary::builtin() : ModelLibrary::loadFromDir(path);
}

void writeViewFiles(const fs::path& dir, const SceneRecord& record, const SceneCapture& capture,
                    bool images, bool clouds) {
    for (std::size_t k = 0; k < capture.views.size(); ++k) {
        const ViewCapture& view = capture.views[k];
        std::string suffix = "_v" + std::to_string(k);
        writeTextFile((dir / ("bboxes" + suffix + ".json")).string(),
                      bboxesToJson(capture.boxes[k], record.sceneId, static_cast<int>(k)));
        if (images) {
            writePgm16((dir / ("depth" + suffix + ".pgm")).string(), depthToImage(view));
            writePgm16((dir / ("seg" + suffix + ".pgm")).string(), segToImage(view));
            writePpm8((dir / ("color" + suffix + ".ppm")).string(), colorToImage(view));
        }
        if (clouds) writeCloudPly((dir / ("cloud" + suffix + ".ply")).string(), view.cloud);
    }
}

SceneOutcome runScene(const PipelineConfig& config, const ModelLibrary& lib, const fs::path& root,
                      int index) {
    SceneOutcome out;
    out.index = index;
    out.dir = sceneDirName(index);
    out.seed = deriveSeed(config.seed, static_cast<std::uint64_t>(index));
    fs::path dir = root / out.dir;
    try {
        Rng countRng(deriveSeed(out.seed, 101));
        int span = config.objectCountMax - config.objectCountMin + 1;
        int requested =
            config.objectCountMin + static_cast<int>(countRng.uniformIndex(span));
        SceneRecord record = generateScene(lib, requested, out.seed, config.gen);
        out.sceneId = record.sceneId;
        out.objectCount = static_cast<int>(record.objects.size());

        Mrg mrg = extractMrg(record, lib, config.mrg);
        SceneCapture capture = captureScene(record, lib);

        Rng cloudRng(deriveSeed(out.seed, 102));
        PointCloud cloud =
            capPerObject(mergeViewClouds(capture), config.cloudCapPerObject, cloudRng);
        Rng graspRng(deriveSeed(out.seed, 103));
        GraspAnnotateParams graspParams{config.gripper, config.friction,
                                        config.verticalityThreshold};
        std::map<int, GraspSet> grasps = annotateGrasps(record, lib, cloud, graspRng, graspParams);

        fs::create_directories(dir);
        writeTextFile((dir / "scene.json").string(), sceneToJson(record));
        writeTextFile((dir / "mrg.json").string(), mrgToJson(mrg, record.sceneId));
        writeTextFile((dir / "grasps3d.json").string(), grasps3dToJson(grasps, record.sceneId));
        writeViewFiles(dir, record, capture, config.exportImages, config.exportClouds);
        if (config.exportGrasps2d) {
            for (std::size_t k = 0; k < record.cameraRig.size(); ++k) {
                std::vector<Grasp2D> g2 =
                    projectScene(grasps, config.gripper, record.cameraRig[k]);
                writeTextFile((dir / ("grasps2d_v" + std::to_string(k) + ".json")).string(),
                              grasps2dToJson(g2, record.sceneId, static_cast<int>(k)));
            }
        }
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
        std::error_code ec;
        fs::remove_all(dir, ec);  // no partial bundles
    }
    return out;
}

nlohmann::json configEcho(const PipelineConfig& c) {
    return nlohmann::json{
        {"library", c.modelLibraryPath},
        {"objectCountMin", c.objectCountMin},
        {"objectCountMax", c.objectCountMax},
        {"cloudCapPerObject", c.cloudCapPerObject},
        {"friction", c.friction},
        {"verticalityThresholdDeg", radToDeg(c.verticalityThreshold)},
        {"gripper",
         nlohmann::json{{"maxOpening", c.gripper.maxOpening},
                        {"fingerLength", c.gripper.fingerLength},
                        {"fingerThickness", c.gripper.fingerThickness},
                        {"fingerWidth", c.gripper.fingerWidth},
                        {"baseDepth", c.gripper.baseDepth}}},
        {"mrg",
         nlohmann::json{{"epsilonTranslation", c.mrg.epsilonTranslation},
                        {"epsilonRotationDeg", radToDeg(c.mrg.epsilonRotation)},
                        {"perturbSteps", c.mrg.perturbSteps}}},
        {"rig",
         nlohmann::json{{"height", c.gen.rig.height},
                        {"spacing", c.gen.rig.spacing},
                        {"fx", c.gen.rig.fx},
                        {"fy", c.gen.rig.fy},
                        {"cx", c.gen.rig.cx},
                        {"cy", c.gen.rig.cy},
                        {"imageWidth", c.gen.rig.imageWidth},
                        {"imageHeight", c.gen.rig.imageHeight}}},
        {"exportClouds", c.exportClouds},
        {"exportImages", c.exportImages},
        {"exportGrasps2d", c.exportGrasps2d}};
}

} // namespace

GenerateReport cmdGenerate(const PipelineConfig& config) {
    config.validate();
    if (config.outputDir.empty())
        throw std::invalid_argument("generation needs an output directory");
    ModelLibrary lib = openLibrary(config.modelLibraryPath);  // before any output appears

    fs::path root(config.outputDir);
    fs::create_directories(root);

    GenerateReport report;
    report.outputDir = root.string();
    report.outcomes.resize(config.sceneCount);

    unsigned hw = std::thread::hardware_concurrency();
    int workers = config.workers > 0 ? config.workers : static_cast<int>(hw ? hw : 1);
    workers = std::min(workers, config.sceneCount);

    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= config.sceneCount) break;
            report.outcomes[i] = runScene(config, lib, root, i);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();

    nlohmann::json scenes = nlohmann::json::array();
    for (const SceneOutcome& o : report.outcomes) {
        scenes.push_back(nlohmann::json{{"index", o.index},
                                        {"dir", o.dir},
                                        {"sceneId", o.sceneId},
                                        {"seed", o.seed},
                                        {"objectCount", o.objectCount},
                                        {"status", o.ok ? "ok" : "failed"},
                                        {"error", o.error}});
        (o.ok ? report.succeeded : report.failed) += 1;
    }
    nlohmann::json manifest{{"schemaVersion", kSchemaVersion},
                            {"seed", config.seed},
                            {"sceneCount", config.sceneCount},
                            {"config", configEcho(config)},
                            {"scenes", scenes}};
    writeTextFile((root / "manifest.json").string(), manifest.dump(2) + "\n");
    return report;
}

namespace {

struct ManifestParams {
    GripperModel gripper;
    // validation only needs the gripper; other echoed values are ignored
};

ManifestParams manifestParams(const fs::path& root, std::vector<ValidationIssue>& issues) {
    ManifestParams params;
    fs::path file = root / "manifest.json";
    if (!fs::exists(file)) return params;
    try {
        nlohmann::json doc = nlohmann::json::parse(readTextFile(file.string()));
        if (doc.contains("config") && doc["config"].contains("gripper")) {
            const nlohmann::json& g = doc["config"]["gripper"];
            params.gripper.maxOpening = g.at("maxOpening").get<double>();
            params.gripper.fingerLength = g.at("fingerLength").get<double>();
            params.gripper.fingerThickness = g.at("fingerThickness").get<double>();
            params.gripper.fingerWidth = g.at("fingerWidth").get<double>();
            params.gripper.baseDepth = g.at("baseDepth").get<double>();
        }
    } catch (const std::exception& e) {
        issues.push_back({"", std::string("manifest.json: ") + e.what()});
    }
    return params;
}

// Pixel grid holding just enough of a view to re-derive boxes.
ViewCapture segOnlyCapture(const Image16& img) {
    ViewCapture cap;
    cap.width = img.width;
    cap.height = img.height;
    cap.segmentation.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        cap.segmentation[i] = img.pixels[i] == 0 ? kBackgroundId : static_cast<int>(img.pixels[i]) - 1;
    return cap;
}

} // namespace

ValidateReport cmdValidate(const std::string& datasetDir, const std::string& modelLibraryPath) {
    fs::path root(datasetDir);
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw std::runtime_error("not a directory: " + datasetDir);
    ModelLibrary lib = openLibrary(modelLibraryPath);

    ValidateReport report;
    ManifestParams params = manifestParams(root, report.issues);

    std::vector<fs::path> sceneDirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory() && fs::exists(entry.path() / "scene.json"))
            sceneDirs.push_back(entry.path());
    std::sort(sceneDirs.begin(), sceneDirs.end());

    for (const fs::path& dir : sceneDirs) {
        std::string name = dir.filename().string();
        auto issue = [&](const std::string& what) { report.issues.push_back({name, what}); };
        ++report.scenesChecked;

        SceneRecord record;
        try {
            record = sceneFromJson(readTextFile((dir / "scene.json").string()));
            record.validate(lib);
        } catch (const std::exception& e) {
            issue(std::string("scene.json: ") + e.what());
            continue;
        }
        std::set<int> ids;
        for (const SceneObject& o : record.objects) ids.insert(o.objectId);

        PosedScene scene = PosedScene::build(record, lib);

        // relationship graph: node set matches, parents are real and not self
        try {
            Mrg mrg = mrgFromJson(readTextFile((dir / "mrg.json").string()));
            if (mrg.objects() != ids) issue("mrg.json: node set differs from the scene's objects");
            for (const auto& [id, parents] : mrg.parents) {
                for (int p : parents) {
                    if (p == id) issue("mrg.json: object " + std::to_string(id) + " is its own parent");
                    else if (!ids.count(p))
                        issue("mrg.json: parent " + std::to_string(p) + " is not a scene object");
                }
            }
        } catch (const std::exception& e) {
            issue(std::string("mrg.json: ") + e.what());
        }

        // 3D grasps: owners exist, scores in range, sampled collision checks
        std::map<int, GraspSet> grasps;
        bool haveGrasps = false;
        try {
            grasps = grasps3dFromJson(readTextFile((dir / "grasps3d.json").string()));
            haveGrasps = true;
            for (const auto& [id, set] : grasps) {
                if (!ids.count(id)) {
                    issue("grasps3d.json: owner " + std::to_string(id) + " is not a scene object");
                    continue;
                }
                for (const Grasp3D& g : set.grasps) {
                    if (g.antipodalScore < 0.0 || g.antipodalScore > 1.0 || g.centerScore < 0.0 ||
                        g.centerScore > 1.0) {
                        issue("grasps3d.json: score out of [0,1] on object " + std::to_string(id));
                        break;
                    }
                    if (std::abs(g.gripperOrientation.norm() - 1.0) > 1e-9) {
                        issue("grasps3d.json: non-unit approach on object " + std::to_string(id));
                        break;
                    }
                }
            }
            std::vector<const Grasp3D*> sample;
            for (const auto& [id, set] : grasps) {
                (void)id;
                std::size_t stride = std::max<std::size_t>(1, set.grasps.size() / 4);
                for (std::size_t i = 0; i < set.grasps.size() && sample.size() < 12; i += stride)
                    sample.push_back(&set.grasps[i]);
            }
            if (!sample.empty()) {
                std::vector<SurfaceSamples> surface = oracleSampleScene(scene.meshes());
                for (const Grasp3D* g : sample) {
                    if (oracleGraspCollides(*g, params.gripper, surface, g->ownerObjectId))
                        issue("grasps3d.json: stored grasp on object " +
                              std::to_string(g->ownerObjectId) + " fails the collision oracle");
                }
            }
        } catch (const std::exception& e) {
            issue(std::string("grasps3d.json: ") + e.what());
        }

        for (std::size_t k = 0; k < record.cameraRig.size(); ++k) {
            const PinholeCamera& cam = record.cameraRig[k];
            std::string suffix = "_v" + std::to_string(k);

            // segmentation source: stored image when present, else re-render
            ViewCapture cap;
            bool rendered = false;
            fs::path segFile = dir / ("seg" + suffix + ".pgm");
            try {
                if (fs::exists(segFile)) {
                    cap = segOnlyCapture(readPgm16(segFile.string()));
                    if (cap.width != cam.width || cap.height != cam.height) {
                        issue("seg" + suffix + ".pgm: size differs from the camera");
                        continue;
                    }
                } else {
                    cap = renderView(scene.meshes(), cam, {}, static_cast<int>(k));
                    rendered = true;
                }
            } catch (const std::exception& e) {
                issue("seg" + suffix + ".pgm: " + std::string(e.what()));
                continue;
            }

            // boxes must equal the segmentation-derived ones exactly
            try {
                std::vector<BBox2D> stored =
                    bboxesFromJson(readTextFile((dir / ("bboxes" + suffix + ".json")).string()));
                std::vector<BBox2D> expected;
                for (int id : ids)
                    if (auto b = bboxFromSeg(cap, id)) expected.push_back(*b);
                bool match = stored.size() == expected.size();
                for (std::size_t i = 0; match && i < stored.size(); ++i)
                    match = stored[i].objectId == expected[i].objectId &&
                            stored[i].xMin == expected[i].xMin &&
                            stored[i].yMin == expected[i].yMin &&
                            stored[i].xMax == expected[i].xMax &&
                            stored[i].yMax == expected[i].yMax;
                if (!match)
                    issue("bboxes" + suffix + ".json: differs from the segmentation-derived boxes");
            } catch (const std::exception& e) {
                issue("bboxes" + suffix + ".json: " + std::string(e.what()));
            }

            // 2D grasps must reproject from the stored 3D ones
            fs::path g2File = dir / ("grasps2d" + suffix + ".json");
            if (haveGrasps && fs::exists(g2File)) {
                try {
                    std::vector<Grasp2D> stored = grasps2dFromJson(readTextFile(g2File.string()));
                    std::vector<Grasp2D> expected = projectScene(grasps, params.gripper, cam);
                    bool match = stored.size() == expected.size();
                    for (std::size_t i = 0; match && i < stored.size(); ++i) {
                        const Grasp2D& s = stored[i];
                        const Grasp2D& e = expected[i];
                        match = s.ownerObjectId == e.ownerObjectId &&
                                s.sourceGraspIndex == e.sourceGraspIndex &&
                                s.clipped == e.clipped &&
                                std::abs(s.center.x - e.center.x) < 1e-9 &&
                                std::abs(s.center.y - e.center.y) < 1e-9 &&
                                std::abs(s.width - e.width) < 1e-9 &&
                                std::abs(s.height - e.height) < 1e-9 &&
                                std::abs(s.alpha - e.alpha) < 1e-9;
                    }
                    if (!match)
                        issue("grasps2d" + suffix + ".json: differs from the reprojected grasps");
                } catch (const std::exception& e) {
                    issue("grasps2d" + suffix + ".json: " + std::string(e.what()));
                }
            }

            // stored cloud points must sit on their pixels
            fs::path cloudFile = dir / ("cloud" + suffix + ".ply");
            if (fs::exists(cloudFile)) {
                try {
                    PointCloud cloud = readCloudPly(cloudFile.string());
                    std::size_t stride = std::max<std::size_t>(1, cloud.points.size() / 50);
                    for (std::size_t i = 0; i < cloud.points.size(); i += stride) {
                        const CloudPoint& p = cloud.points[i];
                        PixelDepth pd = projectPoint(cam, p.position);
                        int px = static_cast<int>(std::lround(pd.pixel.x));
                        int py = static_cast<int>(std::lround(pd.pixel.y));
                        if (std::abs(pd.pixel.x - px) > 1e-3 || std::abs(pd.pixel.y - py) > 1e-3) {
                            issue("cloud" + suffix + ".ply: point off its pixel center");
                            break;
                        }
                        if (px < 0 || px >= cap.width || py < 0 || py >= cap.height ||
                            cap.segAt(px, py) != p.objectId) {
                            issue("cloud" + suffix + ".ply: point id disagrees with segmentation");
                            break;
                        }
                        if (rendered && std::abs(cap.depthAt(px, py) - pd.depth) > 1e-5) {
                            issue("cloud" + suffix + ".ply: point depth disagrees with the render");
                            break;
                        }
                    }
                } catch (const std::exception& e) {
                    issue("cloud" + suffix + ".ply: " + std::string(e.what()));
                }
            }
        }
    }
    return report;
}

DatasetSummary cmdStats(const std::string& datasetDir, const std::string& outDir) {
    DatasetSummary summary = summarize(datasetDir);
    writeSummary(summary, outDir);
    return summary;
}

void cmdRender(const std::string& sceneDir, const std::string& modelLibraryPath) {
    fs::path dir(sceneDir);
    SceneRecord record = sceneFromJson(readTextFile((dir / "scene.json").string()));
    ModelLibrary lib = openLibrary(modelLibraryPath);
    record.validate(lib);
    SceneCapture capture = captureScene(record, lib);
    writeViewFiles(dir, record, capture, /*images=*/true, /*clouds=*/true);
}

Mrg cmdMrg(const std::string& sceneDir, const std::string& modelLibraryPath,
           const MrgConfig& cfg) {
    fs::path dir(sceneDir);
    SceneRecord record = sceneFromJson(readTextFile((dir / "scene.json").string()));
    ModelLibrary lib = openLibrary(modelLibraryPath);
    record.validate(lib);
    Mrg mrg = extractMrg(record, lib, cfg);
    writeTextFile((dir / "mrg.json").string(), mrgToJson(mrg, record.sceneId));
    return mrg;
}

} // namespace cluttergen
