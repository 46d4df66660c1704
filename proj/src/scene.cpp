#include "cluttergen/scene.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cluttergen/mesh_io.hpp"
#include "cluttergen/primitives.hpp"

namespace cluttergen {

std::string splitToString(Split s) {
    switch (s) {
        case Split::SeenTrain: return "seen-train";
        case Split::SeenVal: return "seen-val";
        case Split::SeenTest: return "seen-test";
        case Split::UnseenVal: return "unseen-val";
        case Split::UnseenTest: return "unseen-test";
    }
    throw std::invalid_argument("unknown split value");
}

Split splitFromString(const std::string& s) {
    if (s == "seen-train") return Split::SeenTrain;
    if (s == "seen-val") return Split::SeenVal;
    if (s == "seen-test") return Split::SeenTest;
    if (s == "unseen-val") return Split::UnseenVal;
    if (s == "unseen-test") return Split::UnseenTest;
    throw std::invalid_argument("unknown split tag: " + s);
}

void ModelLibrary::add(ModelEntry entry) {
    if (entry.modelId.empty()) throw std::invalid_argument("modelId must not be empty");
    if (find(entry.modelId))
        throw std::invalid_argument("duplicate modelId: " + entry.modelId);
    entry.mesh.validate();
    entry.mesh.modelId = entry.modelId;
    entry.mesh.category = entry.category;
    entries_.push_back(std::move(entry));
}

const ModelEntry* ModelLibrary::find(const std::string& modelId) const {
    for (const auto& e : entries_)
        if (e.modelId == modelId) return &e;
    return nullptr;
}

std::vector<const ModelEntry*> ModelLibrary::withSplit(Split s) const {
    std::vector<const ModelEntry*> out;
    for (const auto& e : entries_)
        if (e.split == s) out.push_back(&e);
    return out;
}

void ModelLibrary::validate() const {
    std::set<std::string> valCats, testCats;
    for (const auto& e : entries_) {
        if (e.split == Split::UnseenVal) valCats.insert(e.category);
        if (e.split == Split::UnseenTest) testCats.insert(e.category);
    }
    for (const auto& c : valCats)
        if (testCats.count(c))
            throw std::invalid_argument(
                "category '" + c + "' appears in both unseen-val and unseen-test");
}

ModelLibrary ModelLibrary::builtin() {
    ModelLibrary lib;
    auto put = [&](const char* id, const char* cat, TriMesh mesh, Split split) {
        lib.add({id, cat, std::move(mesh), split});
    };
    put("box_cube", "box", makeBox(1.0, 1.0, 1.0), Split::SeenTrain);
    put("box_brick", "box", makeBox(1.0, 0.62, 0.40), Split::SeenTrain);
    put("box_tall", "box", makeBox(0.45, 0.45, 1.0), Split::SeenVal);
    put("box_bar", "box", makeBox(1.0, 0.28, 0.22), Split::SeenTest);
    put("slab_square", "slab", makeSlab(1.0, 1.0, 0.18), Split::SeenTrain);
    put("slab_rect", "slab", makeSlab(1.0, 0.64, 0.15), Split::SeenTrain);
    put("slab_long", "slab", makeSlab(1.0, 0.36, 0.12), Split::SeenVal);
    put("cyl_std", "cylinder", makeCylinder(0.3, 1.0), Split::SeenTrain);
    put("cyl_squat", "cylinder", makeCylinder(0.5, 0.42), Split::SeenTrain);
    put("cyl_disk", "cylinder", makeCylinder(0.5, 0.16), Split::SeenTest);
    put("l_even", "lprism", makeLPrism(1.0, 1.0, 0.45, 0.45, 0.35), Split::SeenTrain);
    put("l_thick", "lprism", makeLPrism(1.0, 0.8, 0.5, 0.4, 0.5), Split::SeenVal);
    put("l_flat", "lprism", makeLPrism(1.0, 1.0, 0.4, 0.4, 0.2), Split::SeenTrain);
    put("wedge_low", "wedge", makeWedge(1.0, 0.4, 0.6), Split::UnseenVal);
    put("wedge_steep", "wedge", makeWedge(0.8, 0.9, 0.5), Split::UnseenVal);
    put("wedge_wide", "wedge", makeWedge(1.0, 0.5, 1.2), Split::UnseenVal);
    put("sphere_std", "sphere", makeSphere(0.5), Split::UnseenTest);
    lib.validate();
    return lib;
}

ModelLibrary ModelLibrary::loadFromDir(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::path manifest = fs::path(dir) / "library.json";
    std::ifstream in(manifest);
    if (!in) throw std::runtime_error("cannot open " + manifest.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(manifest.string() + ": " + e.what());
    }
    if (!doc.contains("models") || !doc["models"].is_array())
        throw std::runtime_error(manifest.string() + ": missing \"models\" array");
    ModelLibrary lib;
    for (const auto& m : doc["models"]) {
        ModelEntry e;
        e.modelId = m.at("modelId").get<std::string>();
        e.category = m.at("category").get<std::string>();
        e.split = splitFromString(m.at("split").get<std::string>());
        fs::path file = fs::path(dir) / m.at("file").get<std::string>();
        e.mesh = loadMesh(file.string());
        lib.add(std::move(e));
    }
    lib.validate();
    return lib;
}

double normalizeScale(const TriMesh& mesh, Rng& rng) {
    double extent = longestExtent(mesh);
    if (extent <= 0.0) throw std::invalid_argument("mesh has zero extent");
    return rng.uniform(0.08, 0.20) / extent;
}

std::vector<PinholeCamera> buildCameraRig(const Vec3& center, const CameraRigParams& p) {
    if (p.height <= 0.0) throw std::invalid_argument("rig height must be positive");
    if (p.spacing <= 0.0) throw std::invalid_argument("rig spacing must be positive");
    std::vector<PinholeCamera> rig;
    rig.reserve(9);
    for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) {
            PinholeCamera cam;
            cam.fx = p.fx;
            cam.fy = p.fy;
            cam.cx = p.cx;
            cam.cy = p.cy;
            cam.width = p.imageWidth;
            cam.height = p.imageHeight;
            Vec3 eye = center + Vec3{i * p.spacing, j * p.spacing, p.height};
            cam.pose = lookAtPose(eye, center);
            cam.validate();
            rig.push_back(cam);
        }
    }
    return rig;
}

void SceneRecord::validate(const ModelLibrary& lib) const {
    if (objects.empty() || objects.size() > 20)
        throw std::invalid_argument("scene must hold between 1 and 20 objects, has " +
                                    std::to_string(objects.size()));
    std::set<int> ids;
    for (const auto& o : objects) {
        if (o.objectId < 0) throw std::invalid_argument("negative objectId");
        if (!ids.insert(o.objectId).second)
            throw std::invalid_argument("duplicate objectId " + std::to_string(o.objectId));
        const ModelEntry* e = lib.find(o.modelId);
        if (!e) throw UnresolvedModelError("unknown modelId: " + o.modelId);
        double sized = o.scale * longestExtent(e->mesh);
        if (sized < 0.08 - 1e-9 || sized > 0.20 + 1e-9)
            throw std::invalid_argument("object " + std::to_string(o.objectId) +
                                        " scaled extent " + std::to_string(sized) +
                                        " outside [0.08, 0.20]");
        if (o.linearDamping < 1.0 || o.linearDamping > 1.5 || o.angularDamping < 1.0 ||
            o.angularDamping > 1.5)
            throw std::invalid_argument("damping outside [1, 1.5]");
        if (o.mass <= 0.0) throw std::invalid_argument("object mass must be positive");
    }
    if (cameraRig.size() != 9)
        throw std::invalid_argument("camera rig must hold 9 cameras, has " +
                                    std::to_string(cameraRig.size()));
    for (const auto& cam : cameraRig) {
        cam.validate();
        if (std::abs(cam.pose.translation.z - cameraRig[0].pose.translation.z) > 1e-12)
            throw std::invalid_argument("camera rig heights differ");
    }
    if (metadata.lightCount < 1 || metadata.lightCount > 4)
        throw std::invalid_argument("lightCount must be in [1, 4]");
    if (tableHalfX <= 0.0 || tableHalfY <= 0.0)
        throw std::invalid_argument("table half extents must be positive");
}

namespace {

double stackTopZ(const World& w) {
    double top = 0.0;
    for (const auto& b : w.bodies())
        for (const auto& v : b.shape.vertices) top = std::max(top, b.pose.apply(v).z);
    return top;
}

double circumradius(const ConvexHull& hull) {
    double r = 0.0;
    for (const auto& v : hull.vertices) r = std::max(r, v.norm());
    return r;
}

} // namespace

SceneRecord generateScene(const ModelLibrary& lib, int requestedCount, std::uint64_t seed,
                          const SceneGenParams& params) {
    if (lib.empty()) throw std::invalid_argument("model library is empty");
    if (requestedCount < 5 || requestedCount > 20)
        throw std::invalid_argument("requestedCount must be in [5, 20]");
    lib.validate();

    static const char* kBackgrounds[] = {"plain-gray", "plywood", "white-cloth", "dark-felt"};

    Rng rng(seed);
    SceneRecord rec;
    {
        std::ostringstream name;
        name << "scene_" << std::hex << std::setw(16) << std::setfill('0') << seed;
        rec.sceneId = name.str();
    }
    rec.seed = seed;
    rec.tableHalfX = params.tableHalfX;
    rec.tableHalfY = params.tableHalfY;
    rec.cameraRig = buildCameraRig(Vec3::zero(), params.rig);
    rec.metadata.backgroundTag = kBackgrounds[rng.uniformIndex(4)];
    rec.metadata.lightCount = 1 + static_cast<int>(rng.uniformIndex(4));

    struct DropInfo {
        std::string modelId, category;
        double scale, linD, angD;
    };
    std::map<int, DropInfo> info;

    World w;
    w.tableHalfX = params.tableHalfX;
    w.tableHalfY = params.tableHalfY;

    for (int k = 0; k < requestedCount; ++k) {
        const ModelEntry& entry = lib.entries()[rng.uniformIndex(lib.entries().size())];
        double scale = normalizeScale(entry.mesh, rng);
        double linD = rng.uniform(1.0, 1.5);
        double angD = rng.uniform(1.0, 1.5);
        double px = rng.uniform(-params.tableHalfX * params.footprintFraction,
                                params.tableHalfX * params.footprintFraction);
        double py = rng.uniform(-params.tableHalfY * params.footprintFraction,
                                params.tableHalfY * params.footprintFraction);
        Quat q = rng.uniformQuat();

        Body body = makeBody(k, entry.mesh.scaled(scale), Pose{}, 1000.0, linD, angD);
        double pz = stackTopZ(w) + params.dropClearance + circumradius(body.shape);
        body.pose = Pose{q, {px, py, pz}};
        w.addBody(std::move(body));
        info[k] = {entry.modelId, entry.category, scale, linD, angD};

        SettleResult r = w.settle(params.settleStepsPerDrop, params.still);
        while (!r.unstableIds.empty() && !w.bodies().empty()) {
            for (int id : r.unstableIds) w.removeBody(id);
            if (w.bodies().empty()) break;
            r = w.settle(params.settleStepsPerDrop, params.still);
        }
    }

    if (w.bodies().empty())
        throw EmptySceneError("scene " + rec.sceneId + ": none of the " +
                              std::to_string(requestedCount) +
                              " dropped objects came to rest on the table");

    for (const auto& b : w.bodies()) {
        const DropInfo& d = info.at(b.id);
        SceneObject o;
        o.objectId = static_cast<int>(rec.objects.size());
        o.modelId = d.modelId;
        o.category = d.category;
        o.scale = d.scale;
        o.pose = b.pose;
        o.linearDamping = d.linD;
        o.angularDamping = d.angD;
        o.mass = b.mass;
        rec.objects.push_back(std::move(o));
    }
    rec.validate(lib);
    return rec;
}

World restoreScene(const SceneRecord& record, const ModelLibrary& lib) {
    World w;
    w.tableHalfX = record.tableHalfX;
    w.tableHalfY = record.tableHalfY;
    for (const auto& o : record.objects) {
        const ModelEntry* entry = lib.find(o.modelId);
        if (!entry)
            throw UnresolvedModelError("scene references unknown modelId: " + o.modelId);
        w.addBody(makeBody(o.objectId, entry->mesh.scaled(o.scale), o.pose, 1000.0,
                           o.linearDamping, o.angularDamping));
    }
    return w;
}

PosedScene PosedScene::build(const SceneRecord& record, const ModelLibrary& lib) {
    PosedScene s;
    for (const auto& o : record.objects) {
        const ModelEntry* entry = lib.find(o.modelId);
        if (!entry)
            throw UnresolvedModelError("scene references unknown modelId: " + o.modelId);
        s.meshStore_.push_back(std::make_unique<TriMesh>(entry->mesh.scaled(o.scale)));
        s.bvhStore_.push_back(std::make_unique<MeshBvh>(*s.meshStore_.back()));
        s.meshes_.push_back(
            PosedMesh{s.meshStore_.back().get(), s.bvhStore_.back().get(), o.pose, o.objectId});
    }
    return s;
}

const PosedMesh* PosedScene::find(int objectId) const {
    for (const auto& m : meshes_)
        if (m.objectId == objectId) return &m;
    return nullptr;
}

SceneRecord exportRecord(const World& world, const SceneRecord& base) {
    SceneRecord out = base;
    for (auto& o : out.objects) {
        const Body* b = world.find(o.objectId);
        if (!b)
            throw std::invalid_argument("world is missing recorded object " +
                                        std::to_string(o.objectId));
        o.pose = b->pose;
    }
    return out;
}

} // namespace cluttergen
