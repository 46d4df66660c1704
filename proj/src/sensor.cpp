#include "cluttergen/sensor.hpp"

#include <algorithm>
#include <cmath>

namespace cluttergen {

Vec3 Palette::colorFor(int objectId) const {
    if (objectId == kBackgroundId) return background;
    // golden-angle hue walk, full saturation, distinct for neighboring ids
    double hue = std::fmod(0.618033988749895 * (objectId + 1), 1.0) * 6.0;
    double f = hue - std::floor(hue);
    double q = 1.0 - 0.85 * f;
    double t = 1.0 - 0.85 * (1.0 - f);
    switch (static_cast<int>(hue) % 6) {
        case 0: return {1.0, t, 0.15};
        case 1: return {q, 1.0, 0.15};
        case 2: return {0.15, 1.0, t};
        case 3: return {0.15, q, 1.0};
        case 4: return {t, 0.15, 1.0};
        default: return {1.0, 0.15, q};
    }
}

ViewCapture renderView(const std::vector<PosedMesh>& scene, const PinholeCamera& cam,
                       const Palette& palette, int cameraIndex) {
    cam.validate();
    ViewCapture cap;
    cap.cameraIndex = cameraIndex;
    cap.width = cam.width;
    cap.height = cam.height;
    std::size_t n = static_cast<std::size_t>(cam.width) * static_cast<std::size_t>(cam.height);
    cap.depth.assign(n, 0.0);
    cap.segmentation.assign(n, kBackgroundId);
    cap.color.assign(n, palette.background);

    struct LocalRay {
        Vec3 origin;
        Quat invRot;
    };
    std::vector<LocalRay> frames;
    frames.reserve(scene.size());
    for (const PosedMesh& pm : scene)
        frames.push_back({pm.pose.applyInverse(cam.pose.translation), pm.pose.rotation.conjugate()});

    for (int y = 0; y < cam.height; ++y) {
        for (int x = 0; x < cam.width; ++x) {
            // camera-frame direction with unit Z, so the ray parameter is depth
            Vec3 dirCam{(x - cam.cx) / cam.fx, (y - cam.cy) / cam.fy, 1.0};
            Vec3 dirWorld = cam.pose.rotate(dirCam);

            double bestT = 1e300;
            int bestObject = kBackgroundId;
            const PosedMesh* bestMesh = nullptr;
            int bestFace = -1;
            for (std::size_t i = 0; i < scene.size(); ++i) {
                Vec3 localDir = frames[i].invRot.rotate(dirWorld);
                auto hit = scene[i].bvh->raycast(frames[i].origin, localDir, bestT);
                if (hit && hit->t < bestT) {
                    bestT = hit->t;
                    bestObject = scene[i].objectId;
                    bestMesh = &scene[i];
                    bestFace = hit->face;
                }
            }
            if (bestObject == kBackgroundId) continue;

            std::size_t idx = cap.index(x, y);
            cap.depth[idx] = bestT;
            cap.segmentation[idx] = bestObject;
            Vec3 n = bestMesh->pose.rotate(bestMesh->mesh->faceNormal(bestFace));
            double lambert = std::abs(n.dot(dirWorld.normalized()));
            cap.color[idx] = palette.colorFor(bestObject) * lambert;
        }
    }
    cap.cloud = extractCloud(cap, cam);
    return cap;
}

PointCloud extractCloud(const ViewCapture& capture, const PinholeCamera& cam) {
    PointCloud cloud;
    for (int y = 0; y < capture.height; ++y) {
        for (int x = 0; x < capture.width; ++x) {
            std::size_t idx = capture.index(x, y);
            if (capture.segmentation[idx] == kBackgroundId) continue;
            CloudPoint p;
            p.position = backprojectPixel(cam, Vec2{static_cast<double>(x), static_cast<double>(y)},
                                          capture.depth[idx]);
            p.color = capture.color[idx];
            p.objectId = capture.segmentation[idx];
            cloud.points.push_back(p);
        }
    }
    return cloud;
}

std::optional<BBox2D> bboxFromSeg(const ViewCapture& capture, int objectId) {
    BBox2D box{objectId, capture.width, capture.height, -1, -1};
    for (int y = 0; y < capture.height; ++y) {
        for (int x = 0; x < capture.width; ++x) {
            if (capture.segmentation[capture.index(x, y)] != objectId) continue;
            box.xMin = std::min(box.xMin, x);
            box.yMin = std::min(box.yMin, y);
            box.xMax = std::max(box.xMax, x);
            box.yMax = std::max(box.yMax, y);
        }
    }
    if (box.xMax < 0) return std::nullopt;
    return box;
}

SceneCapture captureScene(const SceneRecord& record, const ModelLibrary& lib,
                          const Palette& palette) {
    PosedScene scene = PosedScene::build(record, lib);
    SceneCapture out;
    for (std::size_t k = 0; k < record.cameraRig.size(); ++k) {
        ViewCapture cap =
            renderView(scene.meshes(), record.cameraRig[k], palette, static_cast<int>(k));
        std::vector<BBox2D> boxes;
        for (const SceneObject& obj : record.objects) {
            if (auto box = bboxFromSeg(cap, obj.objectId)) boxes.push_back(*box);
        }
        std::sort(boxes.begin(), boxes.end(),
                  [](const BBox2D& a, const BBox2D& b) { return a.objectId < b.objectId; });
        out.views.push_back(std::move(cap));
        out.boxes.push_back(std::move(boxes));
    }
    return out;
}

} // namespace cluttergen
