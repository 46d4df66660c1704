#include "cluttergen/oracles.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cluttergen/primitives.hpp"
#include "cluttergen/sim.hpp"

namespace cluttergen {

namespace {

// Resting clearances the solver converges to: bodies float half a
// millimeter above the table and 1.5 mm above each other (contact margins
// minus the penetration slop), so analytically placed scenes barely move.
constexpr double kTableGap = 0.0005;
constexpr double kBoxGap = 0.0015;

std::string boxModelId(double sx, double sy, double sz) {
    std::ostringstream os;
    os << "box_" << std::lround(sx * 1000) << "x" << std::lround(sy * 1000) << "x"
       << std::lround(sz * 1000);
    return os.str();
}

class ScenePen {
public:
    ScenePen(ModelLibrary& lib, const std::string& name) : lib_(lib) {
        rec_.sceneId = name;
        rec_.cameraRig = buildCameraRig(Vec3{0, 0, 0}, CameraRigParams{});
    }

    // Returns the top z of the placed box so stacks can build upward.
    double box(int id, double sx, double sy, double sz, double cx, double cy, double bottom) {
        std::string model = boxModelId(sx, sy, sz);
        if (!lib_.find(model)) {
            ModelEntry e;
            e.modelId = model;
            e.category = "box";
            e.mesh = makeBox(sx, sy, sz);
            lib_.add(std::move(e));
        }
        SceneObject obj;
        obj.objectId = id;
        obj.modelId = model;
        obj.category = "box";
        obj.scale = 1.0;
        obj.pose = Pose{Quat{}, Vec3{cx, cy, bottom + sz / 2}};
        obj.linearDamping = 1.2;
        obj.angularDamping = 1.2;
        obj.mass = 1000.0 * sx * sy * sz;
        rec_.objects.push_back(std::move(obj));
        return bottom + sz;
    }

    SceneRecord take() { return std::move(rec_); }

private:
    ModelLibrary& lib_;
    SceneRecord rec_;
};

SceneRecord wedgeLeaningPair(ModelLibrary& lib) {
    // A tall thin wedge tips over on its own once tilted past ~20 degrees;
    // two of them propped hypotenuse-against-hypotenuse hold each other up.
    const double base = 0.04, height = 0.22, width = 0.14;
    ModelEntry e;
    e.modelId = "wedge_lean";
    e.category = "wedge";
    e.mesh = makeWedge(base, height, width);
    lib.add(std::move(e));

    const double lean = degToRad(30.0);
    const double mass = 1000.0 * 0.5 * base * height * width;

    SceneRecord rec;
    rec.sceneId = "leaning_wedge_pair";
    rec.cameraRig = buildCameraRig(Vec3{0, 0, 0}, CameraRigParams{});
    const Vec3 corners[3] = {Vec3{-base / 2, 0, -height / 2}, Vec3{base / 2, 0, -height / 2},
                             Vec3{-base / 2, 0, height / 2}};
    for (int id = 0; id < 2; ++id) {
        double side = (id == 0) ? 1.0 : -1.0;  // 0 leans toward +x, 1 toward -x
        // The second wedge is the mirror image: half a turn about z flips the
        // cross-section, then the lean goes the other way.
        Quat q = Quat::fromAxisAngle(Vec3{0, 1, 0}, side * lean);
        if (side < 0) q = q * Quat::fromAxisAngle(Vec3{0, 0, 1}, kPi);
        // Track the rotated cross-section: drop the lowest corner to just
        // above the table and bring the apex corner near the center line.
        double minZ = 1e300, apexX = 0.0, apexZ = -1e300;
        for (const Vec3& c : corners) {
            Vec3 w = q.rotate(c);
            minZ = std::min(minZ, w.z);
            if (w.z > apexZ) {
                apexZ = w.z;
                apexX = w.x;
            }
        }
        SceneObject obj;
        obj.objectId = id;
        obj.modelId = "wedge_lean";
        obj.category = "wedge";
        obj.scale = 1.0;
        obj.pose = Pose{q, Vec3{side * -0.002 - apexX, 0, 0.001 - minZ}};
        obj.linearDamping = 1.2;
        obj.angularDamping = 1.2;
        obj.mass = mass;
        rec.objects.push_back(std::move(obj));
    }

    // Let the pair find its true equilibrium so the shipped poses are at
    // rest; construction is deterministic (no randomness anywhere).
    World w = restoreScene(rec, lib);
    w.settle(8000);
    return exportRecord(w, rec);
}

} // namespace

MrgCorpus mrgCorpus() {
    MrgCorpus c;
    auto scene = [&](const std::string& name) { return ScenePen(c.library, name); };
    auto emit = [&](const std::string& name, ScenePen& pen) {
        c.boxScenes.emplace_back(name, pen.take());
    };

    {
        auto p = scene("single_box");
        p.box(0, 0.12, 0.12, 0.08, 0, 0, kTableGap);
        emit("single_box", p);
    }
    {
        auto p = scene("two_disjoint");
        p.box(0, 0.10, 0.10, 0.10, -0.15, 0.00, kTableGap);
        p.box(1, 0.12, 0.08, 0.06, 0.15, 0.10, kTableGap);
        emit("two_disjoint", p);
    }
    {
        auto p = scene("side_by_side");
        p.box(0, 0.10, 0.10, 0.10, -0.0515, 0, kTableGap);
        p.box(1, 0.10, 0.10, 0.10, 0.0515, 0, kTableGap);
        emit("side_by_side", p);
    }
    {
        auto p = scene("stack_centered");
        double t = p.box(0, 0.14, 0.14, 0.07, 0, 0, kTableGap);
        p.box(1, 0.10, 0.10, 0.06, 0, 0, t + kBoxGap);
        emit("stack_centered", p);
    }
    {
        auto p = scene("stack_offset");
        double t = p.box(0, 0.16, 0.16, 0.08, 0, 0, kTableGap);
        p.box(1, 0.10, 0.10, 0.05, 0.03, 0.02, t + kBoxGap);
        emit("stack_offset", p);
    }
    {
        // Ids as a picking sequence would meet them: 0 on top of 1 on top of 2.
        auto p = scene("three_stack");
        p.box(2, 0.16, 0.16, 0.08, 0, 0, kTableGap);
        p.box(1, 0.12, 0.12, 0.07, 0, 0, kTableGap + 0.08 + kBoxGap);
        p.box(0, 0.09, 0.09, 0.06, 0, 0, kTableGap + 0.08 + kBoxGap + 0.07 + kBoxGap);
        emit("three_stack", p);
    }
    {
        auto p = scene("four_stack");
        double t = p.box(0, 0.18, 0.18, 0.06, 0, 0, kTableGap);
        t = p.box(1, 0.15, 0.15, 0.06, 0, 0, t + kBoxGap);
        t = p.box(2, 0.12, 0.12, 0.06, 0, 0, t + kBoxGap);
        p.box(3, 0.09, 0.09, 0.06, 0, 0, t + kBoxGap);
        emit("four_stack", p);
    }
    {
        auto p = scene("bridge_symmetric");
        double t = p.box(0, 0.05, 0.12, 0.10, -0.10, 0, kTableGap);
        p.box(1, 0.05, 0.12, 0.10, 0.10, 0, kTableGap);
        p.box(2, 0.30, 0.10, 0.03, 0, 0, t + kBoxGap);
        emit("bridge_symmetric", p);
    }
    {
        // Deck mass sits over the left pillar; the right one is dispensable.
        auto p = scene("bridge_asymmetric");
        double t = p.box(0, 0.04, 0.12, 0.10, -0.10, 0, kTableGap);
        p.box(1, 0.04, 0.12, 0.10, 0.10, 0, kTableGap);
        p.box(2, 0.44, 0.10, 0.03, -0.10, 0, t + kBoxGap);
        emit("bridge_asymmetric", p);
    }
    {
        auto p = scene("bridge_y");
        double t = p.box(0, 0.12, 0.05, 0.10, 0, -0.10, kTableGap);
        p.box(1, 0.12, 0.05, 0.10, 0, 0.10, kTableGap);
        p.box(2, 0.10, 0.30, 0.03, 0, 0, t + kBoxGap);
        emit("bridge_y", p);
    }
    {
        // Removing any single pillar leaves the centroid supported.
        auto p = scene("three_pillar_bridge");
        double t = p.box(0, 0.06, 0.10, 0.10, -0.12, 0, kTableGap);
        p.box(1, 0.06, 0.10, 0.10, 0.00, 0, kTableGap);
        p.box(2, 0.06, 0.10, 0.10, 0.12, 0, kTableGap);
        p.box(3, 0.36, 0.10, 0.03, 0, 0, t + kBoxGap);
        emit("three_pillar_bridge", p);
    }
    {
        auto p = scene("four_leg_table");
        double t = 0;
        int id = 0;
        for (double sx : {-0.10, 0.10})
            for (double sy : {-0.07, 0.07}) t = p.box(id++, 0.05, 0.05, 0.08, sx, sy, kTableGap);
        p.box(4, 0.30, 0.22, 0.03, 0, 0, t + kBoxGap);
        emit("four_leg_table", p);
    }
    {
        auto p = scene("two_diag_legs");
        double t = p.box(0, 0.06, 0.06, 0.08, -0.10, -0.07, kTableGap);
        p.box(1, 0.06, 0.06, 0.08, 0.10, 0.07, kTableGap);
        p.box(2, 0.30, 0.22, 0.03, 0, 0, t + kBoxGap);
        emit("two_diag_legs", p);
    }
    {
        auto p = scene("stack_with_passenger");
        double t = p.box(0, 0.12, 0.12, 0.08, 0, 0, kTableGap);
        t = p.box(1, 0.20, 0.10, 0.03, 0, 0, t + kBoxGap);
        p.box(2, 0.05, 0.05, 0.04, 0, 0, t + kBoxGap);
        emit("stack_with_passenger", p);
    }
    {
        auto p = scene("bridge_with_passenger");
        double t = p.box(0, 0.05, 0.12, 0.10, -0.10, 0, kTableGap);
        p.box(1, 0.05, 0.12, 0.10, 0.10, 0, kTableGap);
        t = p.box(2, 0.30, 0.10, 0.03, 0, 0, t + kBoxGap);
        p.box(3, 0.05, 0.05, 0.04, 0, 0, t + kBoxGap);
        emit("bridge_with_passenger", p);
    }
    {
        auto p = scene("wide_on_narrow");
        double t = p.box(0, 0.04, 0.04, 0.12, 0, 0, kTableGap);
        p.box(1, 0.20, 0.20, 0.04, 0, 0, t + kBoxGap);
        emit("wide_on_narrow", p);
    }
    {
        auto p = scene("narrow_on_wide");
        double t = p.box(0, 0.30, 0.30, 0.05, 0, 0, kTableGap);
        p.box(1, 0.06, 0.06, 0.06, 0.08, -0.05, t + kBoxGap);
        emit("narrow_on_wide", p);
    }
    {
        auto p = scene("two_towers");
        double t = p.box(0, 0.12, 0.12, 0.07, -0.15, 0, kTableGap);
        p.box(1, 0.08, 0.08, 0.06, -0.15, 0, t + kBoxGap);
        t = p.box(2, 0.10, 0.10, 0.05, 0.15, 0, kTableGap);
        p.box(3, 0.07, 0.07, 0.07, 0.15, 0, t + kBoxGap);
        emit("two_towers", p);
    }
    {
        auto p = scene("offset_tower");
        double t = p.box(0, 0.16, 0.16, 0.06, 0, 0, kTableGap);
        t = p.box(1, 0.12, 0.12, 0.06, 0.03, 0, t + kBoxGap);
        p.box(2, 0.08, 0.08, 0.06, 0.07, 0, t + kBoxGap);
        emit("offset_tower", p);
    }
    {
        auto p = scene("cantilever_safe");
        double t = p.box(0, 0.20, 0.12, 0.06, 0, 0, kTableGap);
        p.box(1, 0.16, 0.08, 0.04, 0.04, 0, t + kBoxGap);
        emit("cantilever_safe", p);
    }
    {
        auto p = scene("slab_with_two_boxes");
        double t = p.box(0, 0.30, 0.20, 0.04, 0, 0, kTableGap);
        p.box(1, 0.06, 0.06, 0.05, -0.08, 0.04, t + kBoxGap);
        p.box(2, 0.07, 0.07, 0.06, 0.09, -0.03, t + kBoxGap);
        emit("slab_with_two_boxes", p);
    }
    {
        // Mixed floor: a stack, a bridge, and a loner in one scene.
        auto p = scene("mixed_floor");
        double t = p.box(0, 0.12, 0.12, 0.06, -0.25, -0.15, kTableGap);
        p.box(1, 0.08, 0.08, 0.05, -0.25, -0.15, t + kBoxGap);
        t = p.box(2, 0.05, 0.10, 0.09, 0.12, 0.15, kTableGap);
        p.box(3, 0.05, 0.10, 0.09, 0.30, 0.15, kTableGap);
        p.box(4, 0.28, 0.08, 0.03, 0.21, 0.15, t + kBoxGap);
        p.box(5, 0.10, 0.10, 0.07, 0.05, -0.20, kTableGap);
        emit("mixed_floor", p);
    }
    {
        auto p = scene("pyramid_two_one");
        double t = p.box(0, 0.10, 0.10, 0.08, -0.08, 0, kTableGap);
        p.box(1, 0.10, 0.10, 0.08, 0.08, 0, kTableGap);
        p.box(2, 0.20, 0.09, 0.05, 0, 0, t + kBoxGap);
        emit("pyramid_two_one", p);
    }

    c.leaningPair = wedgeLeaningPair(c.library);
    return c;
}

const SceneRecord& corpusScene(const MrgCorpus& corpus, const std::string& name) {
    for (const auto& [n, rec] : corpus.boxScenes)
        if (n == name) return rec;
    throw std::invalid_argument("no corpus scene named " + name);
}

} // namespace cluttergen
