#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cluttergen/geom.hpp"

namespace cluttergen {

// Sentinel objectId for pixels/points not belonging to any object.
constexpr int kBackgroundId = -1;

struct Aabb {
    Vec3 lo{1e300, 1e300, 1e300};
    Vec3 hi{-1e300, -1e300, -1e300};

    void expand(const Vec3& p) { lo = lo.cwiseMin(p); hi = hi.cwiseMax(p); }
    void expand(const Aabb& b) { lo = lo.cwiseMin(b.lo); hi = hi.cwiseMax(b.hi); }
    Vec3 center() const { return (lo + hi) * 0.5; }
    Vec3 extents() const { return hi - lo; }
    bool overlaps(const Aabb& o) const {
        return lo.x <= o.hi.x && hi.x >= o.lo.x && lo.y <= o.hi.y && hi.y >= o.lo.y &&
               lo.z <= o.hi.z && hi.z >= o.lo.z;
    }
};

struct TriMesh {
    std::vector<Vec3> vertices;                 // meters
    std::vector<std::array<int, 3>> triangles;  // vertex indices
    std::string modelId;
    std::string category;

    // Throws std::invalid_argument on an index out of range, an empty
    // triangle list, or a triangle with area <= 1e-12 m^2.
    void validate() const;

    Vec3 faceNormal(int face) const;  // unit, by winding
    double faceArea(int face) const;
    Vec3 faceCentroid(int face) const;
    Vec3 vertexCentroid() const;
    Aabb bounds() const;

    TriMesh scaled(double factor) const;
    TriMesh transformed(const Pose& pose) const;

    // Flips triangles whose winding normal points toward the vertex
    // centroid. Applied at import time; procedural meshes are built with
    // outward winding directly.
    void repairWinding();
};

// Maximum side of the axis-aligned bounding box in the mesh's own frame.
double longestExtent(const TriMesh& mesh);

struct RayHit {
    double distance = 0.0;  // along the (unit) ray direction
    int faceIndex = -1;
    Vec3 faceNormal;        // unit, oriented against the ray
};

// Moller-Trumbore. Returns the ray parameter t (p = origin + t*dir) or
// nothing. `dir` need not be unit length; t scales accordingly.
std::optional<double> intersectRayTriangle(const Vec3& origin, const Vec3& dir,
                                           const Vec3& a, const Vec3& b, const Vec3& c);

// Nearest positive intersection of a unit-direction ray with a posed mesh.
// Throws std::invalid_argument if |direction| deviates from 1 beyond 1e-9.
std::optional<RayHit> rayMeshIntersect(const Vec3& origin, const Vec3& direction,
                                       const TriMesh& mesh, const Pose& meshPose);

// Median-split BVH over a mesh's triangles, in the mesh's local frame.
class MeshBvh {
public:
    MeshBvh() = default;
    explicit MeshBvh(const TriMesh& mesh);

    // Nearest hit with t in (tMin, tMax]. Direction may be non-unit; t is in
    // units of |dir|.
    struct Hit {
        double t;
        int face;
    };
    std::optional<Hit> raycast(const Vec3& origin, const Vec3& dir, double tMax = 1e300) const;

    struct ClosestPoint {
        Vec3 point;
        int face;
        double distSq;
    };
    ClosestPoint closestPoint(const Vec3& p) const;

    // Visits every triangle whose AABB overlaps `box`; the callback gets the
    // face index and returns true to stop the traversal early.
    template <class Fn>
    bool anyTriangle(const Aabb& box, Fn&& fn) const {
        if (nodes_.empty()) return false;
        return anyTriangleRec(0, box, fn);
    }

    const Aabb& rootBounds() const { return nodes_.empty() ? emptyBounds_ : nodes_[0].bounds; }
    const TriMesh* mesh() const { return mesh_; }

private:
    struct Node {
        Aabb bounds;
        int left = -1;   // internal: child index; leaf: first triangle
        int right = -1;  // internal: child index; leaf: -1
        int count = 0;   // leaf: number of triangles, 0 for internal
    };

    int build(std::vector<int>& faces, int begin, int end);
    template <class Fn>
    bool anyTriangleRec(int nodeIdx, const Aabb& box, Fn&& fn) const {
        const Node& n = nodes_[nodeIdx];
        if (!n.bounds.overlaps(box)) return false;
        if (n.count > 0) {
            for (int i = 0; i < n.count; ++i) {
                if (fn(order_[n.left + i])) return true;
            }
            return false;
        }
        return anyTriangleRec(n.left, box, fn) || anyTriangleRec(n.right, box, fn);
    }

    const TriMesh* mesh_ = nullptr;
    std::vector<Node> nodes_;
    std::vector<int> order_;  // triangle indices, leaf-contiguous
    Aabb emptyBounds_;
};

// A mesh placed in the world, with an acceleration structure. Used by the
// renderer and the grasp pipeline; world-space queries transform into the
// mesh frame internally.
struct PosedMesh {
    const TriMesh* mesh = nullptr;
    const MeshBvh* bvh = nullptr;
    Pose pose;
    int objectId = kBackgroundId;

    Aabb worldBounds() const;
};

} // namespace cluttergen
