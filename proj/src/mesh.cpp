#include "cluttergen/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cluttergen {

void TriMesh::validate() const {
    if (triangles.empty()) throw std::invalid_argument("mesh has no triangles");
    const int n = static_cast<int>(vertices.size());
    for (size_t f = 0; f < triangles.size(); ++f) {
        for (int k = 0; k < 3; ++k) {
            int idx = triangles[f][k];
            if (idx < 0 || idx >= n)
                throw std::invalid_argument("triangle index out of range");
        }
        if (faceArea(static_cast<int>(f)) <= 1e-12)
            throw std::invalid_argument("zero-area triangle in mesh");
    }
}

Vec3 TriMesh::faceNormal(int face) const {
    const auto& t = triangles[face];
    Vec3 n = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
    double len = n.norm();
    if (len <= 0.0) return Vec3::unitZ();
    return n / len;
}

double TriMesh::faceArea(int face) const {
    const auto& t = triangles[face];
    return 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
}

Vec3 TriMesh::faceCentroid(int face) const {
    const auto& t = triangles[face];
    return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

Vec3 TriMesh::vertexCentroid() const {
    Vec3 c;
    for (const auto& v : vertices) c += v;
    return vertices.empty() ? c : c / static_cast<double>(vertices.size());
}

Aabb TriMesh::bounds() const {
    Aabb b;
    for (const auto& v : vertices) b.expand(v);
    return b;
}

TriMesh TriMesh::scaled(double factor) const {
    TriMesh out = *this;
    for (auto& v : out.vertices) v *= factor;
    return out;
}

TriMesh TriMesh::transformed(const Pose& pose) const {
    TriMesh out = *this;
    for (auto& v : out.vertices) v = pose.apply(v);
    return out;
}

void TriMesh::repairWinding() {
    Vec3 c = vertexCentroid();
    for (size_t f = 0; f < triangles.size(); ++f) {
        Vec3 n = faceNormal(static_cast<int>(f));
        Vec3 outward = faceCentroid(static_cast<int>(f)) - c;
        if (n.dot(outward) < 0.0) std::swap(triangles[f][1], triangles[f][2]);
    }
}

double longestExtent(const TriMesh& mesh) {
    if (mesh.vertices.empty()) throw std::invalid_argument("empty mesh");
    Vec3 e = mesh.bounds().extents();
    return std::max({e.x, e.y, e.z});
}

std::optional<double> intersectRayTriangle(const Vec3& origin, const Vec3& dir,
                                           const Vec3& a, const Vec3& b, const Vec3& c) {
    constexpr double kEps = 1e-13;
    Vec3 e1 = b - a;
    Vec3 e2 = c - a;
    Vec3 p = dir.cross(e2);
    double det = e1.dot(p);
    if (std::abs(det) < kEps) return std::nullopt;
    double invDet = 1.0 / det;
    Vec3 s = origin - a;
    double u = s.dot(p) * invDet;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    Vec3 q = s.cross(e1);
    double v = dir.dot(q) * invDet;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    double t = e2.dot(q) * invDet;
    if (t <= kEps) return std::nullopt;
    return t;
}

std::optional<RayHit> rayMeshIntersect(const Vec3& origin, const Vec3& direction,
                                       const TriMesh& mesh, const Pose& meshPose) {
    if (std::abs(direction.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("ray direction must be unit length");

    // Work in the mesh frame; rigid transforms preserve the parameter t.
    Vec3 o = meshPose.applyInverse(origin);
    Vec3 d = meshPose.rotation.conjugate().rotate(direction);

    std::optional<RayHit> best;
    for (size_t f = 0; f < mesh.triangles.size(); ++f) {
        const auto& tri = mesh.triangles[f];
        auto t = intersectRayTriangle(o, d, mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                      mesh.vertices[tri[2]]);
        if (t && (!best || *t < best->distance)) {
            RayHit hit;
            hit.distance = *t;
            hit.faceIndex = static_cast<int>(f);
            best = hit;
        }
    }
    if (best) {
        Vec3 n = meshPose.rotate(mesh.faceNormal(best->faceIndex));
        if (n.dot(direction) > 0.0) n = -n;
        best->faceNormal = n;
    }
    return best;
}

MeshBvh::MeshBvh(const TriMesh& mesh) : mesh_(&mesh) {
    order_.resize(mesh.triangles.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!order_.empty()) {
        std::vector<int> faces = order_;
        nodes_.reserve(2 * faces.size());
        build(faces, 0, static_cast<int>(faces.size()));
    }
}

int MeshBvh::build(std::vector<int>& faces, int begin, int end) {
    int nodeIdx = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    Aabb bounds;
    Aabb centroidBounds;
    for (int i = begin; i < end; ++i) {
        const auto& t = mesh_->triangles[faces[i]];
        for (int k = 0; k < 3; ++k) bounds.expand(mesh_->vertices[t[k]]);
        centroidBounds.expand(mesh_->faceCentroid(faces[i]));
    }
    nodes_[nodeIdx].bounds = bounds;

    int count = end - begin;
    if (count <= 4) {
        nodes_[nodeIdx].left = begin;
        nodes_[nodeIdx].count = count;
        std::copy(faces.begin() + begin, faces.begin() + end, order_.begin() + begin);
        return nodeIdx;
    }

    Vec3 ext = centroidBounds.extents();
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;

    int mid = begin + count / 2;
    std::nth_element(faces.begin() + begin, faces.begin() + mid, faces.begin() + end,
                     [&](int fa, int fb) {
                         return mesh_->faceCentroid(fa)[axis] < mesh_->faceCentroid(fb)[axis];
                     });

    int left = build(faces, begin, mid);
    int right = build(faces, mid, end);
    nodes_[nodeIdx].left = left;
    nodes_[nodeIdx].right = right;
    nodes_[nodeIdx].count = 0;
    return nodeIdx;
}

namespace {

// Slab test; dir components may be zero (division yields +-inf, handled by
// the min/max ordering).
bool rayAabb(const Vec3& o, const Vec3& invDir, const Aabb& b, double tMax) {
    double t0 = 0.0, t1 = tMax;
    for (int i = 0; i < 3; ++i) {
        double lo = (b.lo[i] - o[i]) * invDir[i];
        double hi = (b.hi[i] - o[i]) * invDir[i];
        if (lo > hi) std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
        if (t0 > t1) return false;
    }
    return true;
}

Vec3 closestPointOnTriangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Ericson, Real-Time Collision Detection, 5.1.5.
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    Vec3 bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    Vec3 cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }

    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return a + ab * v + ac * w;
}

} // namespace

std::optional<MeshBvh::Hit> MeshBvh::raycast(const Vec3& origin, const Vec3& dir,
                                             double tMax) const {
    if (nodes_.empty()) return std::nullopt;
    Vec3 invDir{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};

    std::optional<Hit> best;
    double limit = tMax;
    int stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& n = nodes_[stack[--top]];
        if (!rayAabb(origin, invDir, n.bounds, limit)) continue;
        if (n.count > 0) {
            for (int i = 0; i < n.count; ++i) {
                int f = order_[n.left + i];
                const auto& t = mesh_->triangles[f];
                auto hit = intersectRayTriangle(origin, dir, mesh_->vertices[t[0]],
                                                mesh_->vertices[t[1]], mesh_->vertices[t[2]]);
                if (hit && *hit <= limit && (!best || *hit < best->t)) {
                    best = Hit{*hit, f};
                    limit = *hit;
                }
            }
        } else {
            stack[top++] = n.left;
            stack[top++] = n.right;
        }
    }
    return best;
}

MeshBvh::ClosestPoint MeshBvh::closestPoint(const Vec3& p) const {
    ClosestPoint best{Vec3::zero(), -1, 1e300};
    if (nodes_.empty()) return best;

    // Best-first traversal on squared AABB distance.
    auto aabbDistSq = [&](const Aabb& b) {
        double d = 0.0;
        for (int i = 0; i < 3; ++i) {
            double v = p[i];
            if (v < b.lo[i]) d += (b.lo[i] - v) * (b.lo[i] - v);
            else if (v > b.hi[i]) d += (v - b.hi[i]) * (v - b.hi[i]);
        }
        return d;
    };

    struct Entry { double d; int node; };
    Entry stack[64];
    int top = 0;
    stack[top++] = {aabbDistSq(nodes_[0].bounds), 0};
    while (top > 0) {
        Entry e = stack[--top];
        if (e.d >= best.distSq) continue;
        const Node& n = nodes_[e.node];
        if (n.count > 0) {
            for (int i = 0; i < n.count; ++i) {
                int f = order_[n.left + i];
                const auto& t = mesh_->triangles[f];
                Vec3 q = closestPointOnTriangle(p, mesh_->vertices[t[0]], mesh_->vertices[t[1]],
                                                mesh_->vertices[t[2]]);
                double d = (q - p).squaredNorm();
                if (d < best.distSq) best = {q, f, d};
            }
        } else {
            Entry a{aabbDistSq(nodes_[n.left].bounds), n.left};
            Entry b{aabbDistSq(nodes_[n.right].bounds), n.right};
            if (a.d > b.d) std::swap(a, b);  // push farther first
            if (b.d < best.distSq) stack[top++] = b;
            if (a.d < best.distSq) stack[top++] = a;
        }
    }
    return best;
}

Aabb PosedMesh::worldBounds() const {
    Aabb b;
    const Aabb& local = bvh ? bvh->rootBounds() : mesh->bounds();
    for (int i = 0; i < 8; ++i) {
        Vec3 corner{(i & 1) ? local.hi.x : local.lo.x,
                    (i & 2) ? local.hi.y : local.lo.y,
                    (i & 4) ? local.hi.z : local.lo.z};
        b.expand(pose.apply(corner));
    }
    return b;
}

} // namespace cluttergen
