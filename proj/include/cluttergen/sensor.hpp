#pragma once

#include <optional>
#include <vector>

#include "cluttergen/camera.hpp"
#include "cluttergen/cloud.hpp"
#include "cluttergen/mesh.hpp"
#include "cluttergen/scene.hpp"

namespace cluttergen {

// Flat per-object colors, deterministic in the object id.
struct Palette {
    Vec3 background{0.0, 0.0, 0.0};
    Vec3 colorFor(int objectId) const;
};

// Depth, segmentation, flat-shaded color, and the backprojected cloud of
// one camera. Grids are row-major, pixel (x, y) at index y*width + x.
struct ViewCapture {
    int cameraIndex = 0;
    int width = 0, height = 0;
    std::vector<double> depth;      // camera-frame Z in meters, 0 = no hit
    std::vector<int> segmentation;  // objectId, kBackgroundId where empty
    std::vector<Vec3> color;        // rgb in [0, 1]
    PointCloud cloud;

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(x);
    }
    double depthAt(int x, int y) const { return depth[index(x, y)]; }
    int segAt(int x, int y) const { return segmentation[index(x, y)]; }
    const Vec3& colorAt(int x, int y) const { return color[index(x, y)]; }
};

// Pixel-space bounding box, inclusive corners.
struct BBox2D {
    int objectId = kBackgroundId;
    int xMin = 0, yMin = 0, xMax = 0, yMax = 0;
};

// Casts one primary ray per pixel against every posed mesh and keeps the
// nearest hit. Depth is the camera-frame Z of the hit; color is the owner's
// palette color scaled by the unsigned Lambert factor of the face normal.
// The capture's cloud is the backprojection of every non-background pixel.
ViewCapture renderView(const std::vector<PosedMesh>& scene, const PinholeCamera& cam,
                       const Palette& palette = {}, int cameraIndex = 0);

// One point per non-background pixel: backprojected position, the pixel's
// color, and its segmentation id.
PointCloud extractCloud(const ViewCapture& capture, const PinholeCamera& cam);

// Min/max pixel coordinates of the object's segmentation mask, or nothing
// when the object is not visible in this view.
std::optional<BBox2D> bboxFromSeg(const ViewCapture& capture, int objectId);

struct SceneCapture {
    std::vector<ViewCapture> views;            // one per rig camera
    std::vector<std::vector<BBox2D>> boxes;    // per view, ascending objectId
};

// Renders every camera of the record's rig against the posed scene.
SceneCapture captureScene(const SceneRecord& record, const ModelLibrary& lib,
                          const Palette& palette = {});

} // namespace cluttergen
