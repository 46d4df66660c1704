#include "cluttergen/serialize.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace cluttergen {
namespace {

using nlohmann::json;

json vecToJson(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vecFromJson(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected a 3-vector");
    return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json poseToJson(const Pose& p) {
    return json{{"translation", vecToJson(p.translation)},
                {"rotation", json::array({p.rotation.w, p.rotation.x, p.rotation.y, p.rotation.z})}};
}

Pose poseFromJson(const json& j) {
    Pose p;
    p.translation = vecFromJson(j.at("translation"));
    const json& r = j.at("rotation");
    if (!r.is_array() || r.size() != 4) throw std::runtime_error("expected a wxyz quaternion");
    p.rotation = Quat{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()};
    return p;
}

json parseChecked(const std::string& text, const char* what) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string(what) + ": " + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error(std::string(what) + ": not a JSON object");
    int version = doc.contains("schemaVersion") && doc["schemaVersion"].is_number_integer()
                      ? doc["schemaVersion"].get<int>()
                      : -1;
    if (version != kSchemaVersion)
        throw std::runtime_error(std::string(what) + ": unsupported schemaVersion " +
                                 std::to_string(version));
    return doc;
}

// json.at() failures surface as json::exception; convert them so callers
// only ever see runtime_error from this module.
template <typename Fn>
auto rethrowing(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string(what) + ": " + e.what());
    }
}

int idFromKey(const std::string& key, const char* what) {
    try {
        std::size_t used = 0;
        int id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        return id;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string(what) + ": bad object-id key \"" + key + "\"");
    }
}

} // namespace

std::string sceneToJson(const SceneRecord& record) {
    json objects = json::array();
    for (const SceneObject& o : record.objects) {
        objects.push_back(json{{"objectId", o.objectId},
                               {"modelId", o.modelId},
                               {"category", o.category},
                               {"scale", o.scale},
                               {"pose", poseToJson(o.pose)},
                               {"linearDamping", o.linearDamping},
                               {"angularDamping", o.angularDamping},
                               {"mass", o.mass}});
    }
    json rig = json::array();
    for (const PinholeCamera& c : record.cameraRig) {
        rig.push_back(json{{"fx", c.fx},
                           {"fy", c.fy},
                           {"cx", c.cx},
                           {"cy", c.cy},
                           {"width", c.width},
                           {"height", c.height},
                           {"pose", poseToJson(c.pose)}});
    }
    json doc{{"schemaVersion", kSchemaVersion},
             {"sceneId", record.sceneId},
             {"seed", record.seed},
             {"tableHalfX", record.tableHalfX},
             {"tableHalfY", record.tableHalfY},
             {"metadata",
              json{{"backgroundTag", record.metadata.backgroundTag},
                   {"lightCount", record.metadata.lightCount}}},
             {"objects", objects},
             {"cameraRig", rig}};
    return doc.dump(2) + "\n";
}

SceneRecord sceneFromJson(const std::string& text) {
    json doc = parseChecked(text, "scene");
    return rethrowing("scene", [&] {
        SceneRecord record;
        record.sceneId = doc.at("sceneId").get<std::string>();
        record.seed = doc.at("seed").get<std::uint64_t>();
        record.tableHalfX = doc.at("tableHalfX").get<double>();
        record.tableHalfY = doc.at("tableHalfY").get<double>();
        record.metadata.backgroundTag = doc.at("metadata").at("backgroundTag").get<std::string>();
        record.metadata.lightCount = doc.at("metadata").at("lightCount").get<int>();
        for (const json& j : doc.at("objects")) {
            SceneObject o;
            o.objectId = j.at("objectId").get<int>();
            o.modelId = j.at("modelId").get<std::string>();
            o.category = j.at("category").get<std::string>();
            o.scale = j.at("scale").get<double>();
            o.pose = poseFromJson(j.at("pose"));
            o.linearDamping = j.at("linearDamping").get<double>();
            o.angularDamping = j.at("angularDamping").get<double>();
            o.mass = j.at("mass").get<double>();
            record.objects.push_back(std::move(o));
        }
        for (const json& j : doc.at("cameraRig")) {
            PinholeCamera c;
            c.fx = j.at("fx").get<double>();
            c.fy = j.at("fy").get<double>();
            c.cx = j.at("cx").get<double>();
            c.cy = j.at("cy").get<double>();
            c.width = j.at("width").get<int>();
            c.height = j.at("height").get<int>();
            c.pose = poseFromJson(j.at("pose"));
            record.cameraRig.push_back(c);
        }
        return record;
    });
}

std::string mrgToJson(const Mrg& mrg, const std::string& sceneId) {
    json parents = json::object();
    for (const auto& [id, ps] : mrg.parents) {
        json list = json::array();
        for (int p : ps) list.push_back(p);
        parents[std::to_string(id)] = std::move(list);
    }
    json doc{{"schemaVersion", kSchemaVersion}, {"sceneId", sceneId}, {"parents", parents}};
    return doc.dump(2) + "\n";
}

Mrg mrgFromJson(const std::string& text) {
    json doc = parseChecked(text, "mrg");
    return rethrowing("mrg", [&] {
        Mrg mrg;
        for (const auto& [key, list] : doc.at("parents").items()) {
            int id = idFromKey(key, "mrg");
            std::set<int>& ps = mrg.parents[id];
            for (const json& p : list) ps.insert(p.get<int>());
        }
        return mrg;
    });
}

std::string grasps3dToJson(const std::map<int, GraspSet>& sets, const std::string& sceneId) {
    json out = json::object();
    for (const auto& [id, set] : sets) {
        json grasps = json::array();
        for (const Grasp3D& g : set.grasps) {
            grasps.push_back(json{{"graspPoint", vecToJson(g.graspPoint)},
                                  {"approach", vecToJson(g.gripperOrientation)},
                                  {"approachAngle", g.approachAngle},
                                  {"antipodalScore", g.antipodalScore},
                                  {"centerScore", g.centerScore},
                                  {"verticality", g.verticality},
                                  {"depthOffset", g.depthOffset}});
        }
        out[std::to_string(id)] =
            json{{"dMin", set.dMin}, {"dMax", set.dMax}, {"grasps", std::move(grasps)}};
    }
    json doc{{"schemaVersion", kSchemaVersion}, {"sceneId", sceneId}, {"sets", out}};
    return doc.dump(2) + "\n";
}

std::map<int, GraspSet> grasps3dFromJson(const std::string& text) {
    json doc = parseChecked(text, "grasps3d");
    return rethrowing("grasps3d", [&] {
        std::map<int, GraspSet> sets;
        for (const auto& [key, j] : doc.at("sets").items()) {
            int id = idFromKey(key, "grasps3d");
            GraspSet set;
            set.ownerObjectId = id;
            set.dMin = j.at("dMin").get<double>();
            set.dMax = j.at("dMax").get<double>();
            for (const json& gj : j.at("grasps")) {
                Grasp3D g;
                g.graspPoint = vecFromJson(gj.at("graspPoint"));
                g.gripperOrientation = vecFromJson(gj.at("approach"));
                g.approachAngle = gj.at("approachAngle").get<double>();
                g.antipodalScore = gj.at("antipodalScore").get<double>();
                g.centerScore = gj.at("centerScore").get<double>();
                g.verticality = gj.at("verticality").get<double>();
                g.depthOffset = gj.at("depthOffset").get<double>();
                g.ownerObjectId = id;
                set.grasps.push_back(g);
            }
            sets.emplace(id, std::move(set));
        }
        return sets;
    });
}

std::string grasps2dToJson(const std::vector<Grasp2D>& grasps, const std::string& sceneId,
                           int cameraIndex) {
    json list = json::array();
    for (const Grasp2D& g : grasps) {
        list.push_back(json{{"center", json::array({g.center.x, g.center.y})},
                            {"width", g.width},
                            {"height", g.height},
                            {"alphaDegrees", radToDeg(g.alpha)},
                            {"ownerObjectId", g.ownerObjectId},
                            {"sourceGraspIndex", g.sourceGraspIndex},
                            {"clipped", g.clipped}});
    }
    json doc{{"schemaVersion", kSchemaVersion},
             {"sceneId", sceneId},
             {"cameraIndex", cameraIndex},
             {"grasps", list}};
    return doc.dump(2) + "\n";
}

std::vector<Grasp2D> grasps2dFromJson(const std::string& text, int* cameraIndex) {
    json doc = parseChecked(text, "grasps2d");
    return rethrowing("grasps2d", [&] {
        if (cameraIndex) *cameraIndex = doc.at("cameraIndex").get<int>();
        std::vector<Grasp2D> grasps;
        for (const json& j : doc.at("grasps")) {
            Grasp2D g;
            const json& c = j.at("center");
            if (!c.is_array() || c.size() != 2) throw std::runtime_error("grasps2d: bad center");
            g.center = Vec2{c[0].get<double>(), c[1].get<double>()};
            g.width = j.at("width").get<double>();
            g.height = j.at("height").get<double>();
            g.alpha = degToRad(j.at("alphaDegrees").get<double>());
            g.ownerObjectId = j.at("ownerObjectId").get<int>();
            g.sourceGraspIndex = j.at("sourceGraspIndex").get<int>();
            g.clipped = j.at("clipped").get<bool>();
            grasps.push_back(g);
        }
        return grasps;
    });
}

std::string bboxesToJson(const std::vector<BBox2D>& boxes, const std::string& sceneId,
                         int cameraIndex) {
    json list = json::array();
    for (const BBox2D& b : boxes) {
        list.push_back(json{{"objectId", b.objectId},
                            {"xMin", b.xMin},
                            {"yMin", b.yMin},
                            {"xMax", b.xMax},
                            {"yMax", b.yMax}});
    }
    json doc{{"schemaVersion", kSchemaVersion},
             {"sceneId", sceneId},
             {"cameraIndex", cameraIndex},
             {"boxes", list}};
    return doc.dump(2) + "\n";
}

std::vector<BBox2D> bboxesFromJson(const std::string& text, int* cameraIndex) {
    json doc = parseChecked(text, "bboxes");
    return rethrowing("bboxes", [&] {
        if (cameraIndex) *cameraIndex = doc.at("cameraIndex").get<int>();
        std::vector<BBox2D> boxes;
        for (const json& j : doc.at("boxes")) {
            BBox2D b;
            b.objectId = j.at("objectId").get<int>();
            b.xMin = j.at("xMin").get<int>();
            b.yMin = j.at("yMin").get<int>();
            b.xMax = j.at("xMax").get<int>();
            b.yMax = j.at("yMax").get<int>();
            boxes.push_back(b);
        }
        return boxes;
    });
}

void writeTextFile(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string readTextFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("read failed: " + path);
    return text;
}

} // namespace cluttergen
