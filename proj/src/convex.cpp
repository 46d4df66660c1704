#include "cluttergen/convex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cluttergen {

Vec3 ConvexHull::support(const Vec3& dir) const {
    return vertices[supportIndex(dir)];
}

int ConvexHull::supportIndex(const Vec3& dir) const {
    int best = 0;
    double bestDot = vertices[0].dot(dir);
    for (int i = 1; i < static_cast<int>(vertices.size()); ++i) {
        double d = vertices[i].dot(dir);
        if (d > bestDot) {
            bestDot = d;
            best = i;
        }
    }
    return best;
}

Aabb ConvexHull::bounds() const {
    Aabb b;
    for (const auto& v : vertices) b.expand(v);
    return b;
}

namespace {

struct HullFace {
    int a, b, c;
    Vec3 normal;       // unit
    double offset;     // plane: normal . x = offset
    bool alive = true;
    std::vector<int> outside;  // indices of points in front of this face
};

double planeDist(const HullFace& f, const Vec3& p) { return f.normal.dot(p) - f.offset; }

HullFace makeFace(int a, int b, int c, const std::vector<Vec3>& pts) {
    HullFace f;
    f.a = a;
    f.b = b;
    f.c = c;
    Vec3 n = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    double len = n.norm();
    f.normal = len > 0.0 ? n / len : Vec3::unitZ();
    f.offset = f.normal.dot(pts[a]);
    return f;
}

} // namespace

ConvexHull computeConvexHull(const std::vector<Vec3>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 4) throw std::invalid_argument("convex hull needs at least 4 points");

    // Tolerance scaled to the point cloud size.
    Aabb box;
    for (const auto& p : points) box.expand(p);
    double scale = std::max({box.extents().x, box.extents().y, box.extents().z, 1e-12});
    const double eps = 1e-9 * scale;

    // Initial tetrahedron: extreme pair, then farthest from line, then from plane.
    int i0 = 0, i1 = 0;
    {
        double best = -1.0;
        for (int axis = 0; axis < 3; ++axis) {
            int lo = 0, hi = 0;
            for (int i = 1; i < n; ++i) {
                if (points[i][axis] < points[lo][axis]) lo = i;
                if (points[i][axis] > points[hi][axis]) hi = i;
            }
            double d = (points[hi] - points[lo]).squaredNorm();
            if (d > best) {
                best = d;
                i0 = lo;
                i1 = hi;
            }
        }
        if (best <= eps * eps) throw std::invalid_argument("degenerate point set for hull");
    }
    int i2 = -1;
    {
        Vec3 d = (points[i1] - points[i0]).normalized();
        double best = eps;
        for (int i = 0; i < n; ++i) {
            Vec3 rel = points[i] - points[i0];
            double dist = (rel - d * rel.dot(d)).norm();
            if (dist > best) {
                best = dist;
                i2 = i;
            }
        }
        if (i2 < 0) throw std::invalid_argument("collinear point set for hull");
    }
    int i3 = -1;
    {
        Vec3 nrm = (points[i1] - points[i0]).cross(points[i2] - points[i0]).normalized();
        double best = eps;
        for (int i = 0; i < n; ++i) {
            double dist = std::abs(nrm.dot(points[i] - points[i0]));
            if (dist > best) {
                best = dist;
                i3 = i;
            }
        }
        if (i3 < 0) throw std::invalid_argument("coplanar point set for hull");
    }

    std::vector<HullFace> faces;
    auto addFace = [&](int a, int b, int c) {
        faces.push_back(makeFace(a, b, c, points));
        return static_cast<int>(faces.size()) - 1;
    };

    // Orient the initial tetrahedron so all faces point away from its centroid.
    Vec3 tc = (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;
    int f0 = addFace(i0, i1, i2);
    int f1 = addFace(i0, i2, i3);
    int f2 = addFace(i0, i3, i1);
    int f3 = addFace(i1, i3, i2);
    for (int fi : {f0, f1, f2, f3}) {
        if (planeDist(faces[fi], tc) > 0.0) {
            std::swap(faces[fi].b, faces[fi].c);
            faces[fi] = makeFace(faces[fi].a, faces[fi].b, faces[fi].c, points);
        }
    }

    // Assign every point to the first face it lies in front of.
    for (int i = 0; i < n; ++i) {
        for (auto& f : faces) {
            if (planeDist(f, points[i]) > eps) {
                f.outside.push_back(i);
                break;
            }
        }
    }

    // Expand: repeatedly take the farthest outside point of any live face,
    // find the visible set, and stitch new faces over the horizon.
    while (true) {
        int faceIdx = -1;
        int pointIdx = -1;
        double farthest = eps;
        for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
            if (!faces[fi].alive) continue;
            for (int pi : faces[fi].outside) {
                double d = planeDist(faces[fi], points[pi]);
                if (d > farthest) {
                    farthest = d;
                    faceIdx = fi;
                    pointIdx = pi;
                }
            }
        }
        if (faceIdx < 0) break;

        const Vec3& eye = points[pointIdx];
        std::vector<int> visible;
        std::vector<char> seen(faces.size(), 0);
        std::vector<int> work{faceIdx};
        seen[faceIdx] = 1;
        // Flood fill would need adjacency; with modest point counts a scan is fine.
        for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
            if (faces[fi].alive && planeDist(faces[fi], eye) > eps) visible.push_back(fi);
        }

        // Horizon = directed edges of visible faces whose twin is not visible.
        struct Edge { int u, v; };
        std::vector<Edge> horizon;
        auto isVisible = [&](int u, int v) {
            for (int fi : visible) {
                const HullFace& f = faces[fi];
                if ((f.a == v && f.b == u) || (f.b == v && f.c == u) || (f.c == v && f.a == u))
                    return true;
            }
            return false;
        };
        std::vector<int> orphan;
        for (int fi : visible) {
            const HullFace& f = faces[fi];
            int e[3][2] = {{f.a, f.b}, {f.b, f.c}, {f.c, f.a}};
            for (auto& ed : e) {
                if (!isVisible(ed[0], ed[1])) horizon.push_back({ed[0], ed[1]});
            }
            orphan.insert(orphan.end(), f.outside.begin(), f.outside.end());
        }
        for (int fi : visible) {
            faces[fi].alive = false;
            faces[fi].outside.clear();
        }

        std::vector<int> fresh;
        for (const auto& ed : horizon) {
            int nf = addFace(ed.u, ed.v, pointIdx);
            fresh.push_back(nf);
        }
        std::sort(orphan.begin(), orphan.end());
        orphan.erase(std::unique(orphan.begin(), orphan.end()), orphan.end());
        for (int pi : orphan) {
            if (pi == pointIdx) continue;
            for (int nf : fresh) {
                if (planeDist(faces[nf], points[pi]) > eps) {
                    faces[nf].outside.push_back(pi);
                    break;
                }
            }
        }
    }

    // Compact: remap used vertices, keep live faces.
    ConvexHull hull;
    std::vector<int> remap(n, -1);
    for (const auto& f : faces) {
        if (!f.alive) continue;
        for (int idx : {f.a, f.b, f.c}) {
            if (remap[idx] < 0) {
                remap[idx] = static_cast<int>(hull.vertices.size());
                hull.vertices.push_back(points[idx]);
            }
        }
        hull.faces.push_back({remap[f.a], remap[f.b], remap[f.c]});
    }
    if (hull.faces.size() < 4) throw std::invalid_argument("hull construction failed");

    // Mass properties by divergence theorem over signed tetrahedra to origin.
    double vol = 0.0;
    Vec3 ctr;
    for (const auto& f : hull.faces) {
        const Vec3& a = hull.vertices[f[0]];
        const Vec3& b = hull.vertices[f[1]];
        const Vec3& c = hull.vertices[f[2]];
        double v = a.dot(b.cross(c)) / 6.0;
        vol += v;
        ctr += (a + b + c) * (v / 4.0);
    }
    if (vol <= 0.0) throw std::invalid_argument("hull volume not positive");
    hull.volume = vol;
    hull.centroid = ctr / vol;

    // Inertia about the centroid, density 1 (Blow & Binstock covariance form).
    const Mat3 canon = Mat3{{{1.0 / 60, 1.0 / 120, 1.0 / 120},
                             {1.0 / 120, 1.0 / 60, 1.0 / 120},
                             {1.0 / 120, 1.0 / 120, 1.0 / 60}}};
    Mat3 cov = Mat3::zeroes();
    for (const auto& f : hull.faces) {
        Vec3 a = hull.vertices[f[0]] - hull.centroid;
        Vec3 b = hull.vertices[f[1]] - hull.centroid;
        Vec3 c = hull.vertices[f[2]] - hull.centroid;
        Mat3 A = Mat3::fromColumns(a, b, c);
        double det = A.determinant();
        Mat3 contrib = A * canon * A.transposed();
        for (int r = 0; r < 3; ++r)
            for (int col = 0; col < 3; ++col) cov.m[r][col] += det * contrib.m[r][col];
    }
    double trace = cov.m[0][0] + cov.m[1][1] + cov.m[2][2];
    Mat3 inertia = Mat3::diagonal(trace, trace, trace);
    for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) inertia.m[r][col] -= cov.m[r][col];
    hull.unitInertia = inertia;
    return hull;
}

} // namespace cluttergen
