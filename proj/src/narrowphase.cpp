#include "cluttergen/narrowphase.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace cluttergen {

namespace {

struct SupportPoint {
    Vec3 w;  // Minkowski difference point a - b
    Vec3 a;  // world support on A
    Vec3 b;  // world support on B
};

struct Shape {
    const ConvexHull* hull;
    const Pose* pose;

    Vec3 support(const Vec3& worldDir) const {
        Vec3 local = pose->rotation.conjugate().rotate(worldDir);
        return pose->apply(hull->support(local));
    }
};

SupportPoint minkowskiSupport(const Shape& a, const Shape& b, const Vec3& dir) {
    SupportPoint s;
    s.a = a.support(dir);
    s.b = b.support(-dir);
    s.w = s.a - s.b;
    return s;
}

// Closest point to the origin on a segment; fills barycentric weights.
Vec3 closestOnSegment(const Vec3& a, const Vec3& b, double& u, double& v) {
    Vec3 d = b - a;
    double den = d.squaredNorm();
    double t = den > 0.0 ? std::clamp(-a.dot(d) / den, 0.0, 1.0) : 0.0;
    u = 1.0 - t;
    v = t;
    return a + d * t;
}

// Closest point to the origin on a triangle; fills barycentrics (u,v,w for
// a,b,c). Ericson's region walk specialized to query point = origin.
Vec3 closestOnTriangle(const Vec3& a, const Vec3& b, const Vec3& c, double& u, double& v,
                       double& w) {
    Vec3 ab = b - a, ac = c - a;
    Vec3 ap = -a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) {
        u = 1; v = 0; w = 0;
        return a;
    }
    Vec3 bp = -b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) {
        u = 0; v = 1; w = 0;
        return b;
    }
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        double t = d1 / (d1 - d3);
        u = 1 - t; v = t; w = 0;
        return a + ab * t;
    }
    Vec3 cp = -c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) {
        u = 0; v = 0; w = 1;
        return c;
    }
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        double t = d2 / (d2 - d6);
        u = 1 - t; v = 0; w = t;
        return a + ac * t;
    }
    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        u = 0; v = 1 - t; w = t;
        return b + (c - b) * t;
    }
    double den = 1.0 / (va + vb + vc);
    v = vb * den;
    w = vc * den;
    u = 1.0 - v - w;
    return a + ab * v + ac * w;
}

// Reduce the simplex to the feature supporting the closest point and return
// that point. Returns true when the origin is enclosed by a tetrahedron.
bool solveSimplex(std::vector<SupportPoint>& s, Vec3& closest) {
    if (s.size() == 1) {
        closest = s[0].w;
        return false;
    }
    if (s.size() == 2) {
        double u, v;
        closest = closestOnSegment(s[0].w, s[1].w, u, v);
        if (v <= 0.0) s = {s[0]};
        else if (u <= 0.0) s = {s[1]};
        return false;
    }
    if (s.size() == 3) {
        double u, v, w;
        closest = closestOnTriangle(s[0].w, s[1].w, s[2].w, u, v, w);
        std::vector<SupportPoint> keep;
        if (u > 0.0) keep.push_back(s[0]);
        if (v > 0.0) keep.push_back(s[1]);
        if (w > 0.0) keep.push_back(s[2]);
        if (!keep.empty()) s = std::move(keep);
        return false;
    }

    // Tetrahedron: enclosed iff the origin is strictly on the inner side of
    // every face. A near-flat tetrahedron cannot certify enclosure — the
    // fourth point's side of a face it almost lies in is rounding noise, and
    // trusting it reports touching-but-separate hulls as overlapping — so
    // degenerate faces always fall through to the closest-face reduction.
    static const int kFaces[4][3] = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
    double bestDist = 1e300;
    Vec3 bestPoint;
    std::vector<SupportPoint> bestKeep;
    bool enclosed = true;
    for (const auto& f : kFaces) {
        const Vec3& a = s[f[0]].w;
        const Vec3& b = s[f[1]].w;
        const Vec3& c = s[f[2]].w;
        int other = 6 - f[0] - f[1] - f[2];
        Vec3 n = (b - a).cross(c - a);
        double nLen = n.norm();
        double scale = std::max({a.norm(), b.norm(), c.norm(), s[other].w.norm(), 1e-9});
        double sideOrigin = n.dot(-a);
        double sideOther = n.dot(s[other].w - a);
        bool flat = nLen < 1e-14 || std::abs(sideOther) <= 1e-12 * nLen * scale;
        if (!flat && sideOrigin * sideOther >= 0.0) continue;  // inner side
        enclosed = false;
        double u, v, w;
        Vec3 p = closestOnTriangle(a, b, c, u, v, w);
        double d = p.squaredNorm();
        if (d < bestDist) {
            bestDist = d;
            bestPoint = p;
            bestKeep.clear();
            if (u > 0.0) bestKeep.push_back(s[f[0]]);
            if (v > 0.0) bestKeep.push_back(s[f[1]]);
            if (w > 0.0) bestKeep.push_back(s[f[2]]);
        }
    }
    if (enclosed) return true;
    closest = bestPoint;
    if (!bestKeep.empty()) s = std::move(bestKeep);
    return false;
}

// Witness points for the closest simplex feature via barycentric weights.
void witnesses(const std::vector<SupportPoint>& s, const Vec3& closest, Vec3& onA, Vec3& onB) {
    if (s.size() == 1) {
        onA = s[0].a;
        onB = s[0].b;
        return;
    }
    if (s.size() == 2) {
        double u, v;
        closestOnSegment(s[0].w, s[1].w, u, v);
        onA = s[0].a * u + s[1].a * v;
        onB = s[0].b * u + s[1].b * v;
        return;
    }
    double u, v, w;
    closestOnTriangle(s[0].w, s[1].w, s[2].w, u, v, w);
    onA = s[0].a * u + s[1].a * v + s[2].a * w;
    onB = s[0].b * u + s[1].b * v + s[2].b * w;
    (void)closest;
}

struct EpaFace {
    int a, b, c;
    Vec3 normal;  // unit, away from origin
    double dist;  // distance of the face plane from the origin
    bool alive = true;
};

EpaFace makeEpaFace(const std::vector<SupportPoint>& verts, int a, int b, int c) {
    EpaFace f{a, b, c, {}, 0.0, true};
    Vec3 n = (verts[b].w - verts[a].w).cross(verts[c].w - verts[a].w);
    double len = n.norm();
    if (len < 1e-14) {
        f.alive = false;
        return f;
    }
    n = n / len;
    double d = n.dot(verts[a].w);
    if (d < 0.0) {  // orient away from the origin
        std::swap(f.b, f.c);
        n = -n;
        d = -d;
    }
    f.normal = n;
    f.dist = d;
    return f;
}

// Expands the terminal simplex into the penetration normal and depth.
// Returns false when the polytope degenerates; the caller falls back to a
// support-based axis estimate.
bool runEpa(const Shape& a, const Shape& b, std::vector<SupportPoint> verts, Vec3& normal,
            double& depth, Vec3& onA, Vec3& onB) {
    // Ensure a non-degenerate tetrahedron around the origin.
    const Vec3 axes[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (int k = 0; k < 6 && verts.size() < 4; ++k) {
        SupportPoint s = minkowskiSupport(a, b, axes[k]);
        bool dup = false;
        for (const auto& v : verts)
            if ((v.w - s.w).squaredNorm() < 1e-18) dup = true;
        if (dup) continue;
        if (verts.size() == 3) {
            Vec3 n = (verts[1].w - verts[0].w).cross(verts[2].w - verts[0].w);
            if (std::abs(n.dot(s.w - verts[0].w)) < 1e-14) continue;  // coplanar
        }
        if (verts.size() == 2) {
            Vec3 d = verts[1].w - verts[0].w;
            if (d.cross(s.w - verts[0].w).squaredNorm() < 1e-18) continue;  // collinear
        }
        verts.push_back(s);
    }
    if (verts.size() < 4) return false;

    std::vector<EpaFace> faces{makeEpaFace(verts, 0, 1, 2), makeEpaFace(verts, 0, 2, 3),
                               makeEpaFace(verts, 0, 3, 1), makeEpaFace(verts, 1, 3, 2)};
    for (const auto& f : faces)
        if (!f.alive) return false;

    for (int iter = 0; iter < 64; ++iter) {
        int best = -1;
        double bestDist = 1e300;
        for (int i = 0; i < static_cast<int>(faces.size()); ++i) {
            if (faces[i].alive && faces[i].dist < bestDist) {
                bestDist = faces[i].dist;
                best = i;
            }
        }
        if (best < 0) return false;
        const EpaFace face = faces[best];

        SupportPoint s = minkowskiSupport(a, b, face.normal);
        double grow = s.w.dot(face.normal) - face.dist;
        if (grow < 1e-7 || iter == 63) {
            normal = face.normal;
            depth = std::max(face.dist, 0.0);
            // Witnesses: project the origin onto the face, use barycentrics.
            double u, v, w;
            closestOnTriangle(verts[face.a].w, verts[face.b].w, verts[face.c].w, u, v, w);
            onA = verts[face.a].a * u + verts[face.b].a * v + verts[face.c].a * w;
            onB = verts[face.a].b * u + verts[face.b].b * v + verts[face.c].b * w;
            return true;
        }

        int sIdx = static_cast<int>(verts.size());
        verts.push_back(s);

        // Remove faces visible from s, collect the horizon, stitch new faces.
        struct Edge { int u, v; };
        std::vector<Edge> edges;
        auto addEdge = [&](int u, int v) {
            for (size_t i = 0; i < edges.size(); ++i) {
                if (edges[i].u == v && edges[i].v == u) {
                    edges.erase(edges.begin() + static_cast<long>(i));
                    return;
                }
            }
            edges.push_back({u, v});
        };
        for (auto& f : faces) {
            if (!f.alive) continue;
            if (f.normal.dot(s.w - verts[f.a].w) > 1e-12) {
                f.alive = false;
                addEdge(f.a, f.b);
                addEdge(f.b, f.c);
                addEdge(f.c, f.a);
            }
        }
        if (edges.empty()) {  // numerical stall: accept the current face
            normal = face.normal;
            depth = std::max(face.dist, 0.0);
            double u, v, w;
            closestOnTriangle(verts[face.a].w, verts[face.b].w, verts[face.c].w, u, v, w);
            onA = verts[face.a].a * u + verts[face.b].a * v + verts[face.c].a * w;
            onB = verts[face.a].b * u + verts[face.b].b * v + verts[face.c].b * w;
            return true;
        }
        for (const auto& e : edges) {
            EpaFace nf = makeEpaFace(verts, e.u, e.v, sIdx);
            if (nf.alive) faces.push_back(nf);
        }
    }
    return false;
}

} // namespace

DistanceResult convexDistance(const ConvexHull& hullA, const Pose& poseA, const ConvexHull& hullB,
                              const Pose& poseB) {
    Shape a{&hullA, &poseA};
    Shape b{&hullB, &poseB};

    Vec3 d0 = poseB.apply(hullB.centroid) - poseA.apply(hullA.centroid);
    if (d0.squaredNorm() < 1e-18) d0 = Vec3::unitX();

    std::vector<SupportPoint> simplex{minkowskiSupport(a, b, d0)};
    Vec3 closest = simplex[0].w;
    bool intersecting = false;

    for (int iter = 0; iter < 64; ++iter) {
        if (solveSimplex(simplex, closest)) {
            intersecting = true;
            break;
        }
        double distSq = closest.squaredNorm();
        if (distSq < 1e-18) {
            intersecting = true;
            break;
        }
        Vec3 dir = -closest;
        SupportPoint s = minkowskiSupport(a, b, dir);
        // Converged when the new support cannot get meaningfully closer:
        // |v|^2 - v.w bounds the gap between |v| and the true distance.
        if (distSq - closest.dot(s.w) <= 1e-10 * std::max(distSq, 1e-12)) break;
        bool dup = false;
        for (const auto& v : simplex)
            if ((v.w - s.w).squaredNorm() < 1e-20) dup = true;
        if (dup) break;
        simplex.push_back(s);
    }

    DistanceResult res;
    if (!intersecting) {
        res.distance = closest.norm();
        witnesses(simplex, closest, res.pointA, res.pointB);
        if (res.distance > 1e-12) {
            res.normal = (res.pointB - res.pointA) / res.distance;
        } else {
            res.normal = d0.normalized();
        }
        return res;
    }

    res.intersecting = true;
    Vec3 n, wa, wb;
    double depth = 0.0;
    if (runEpa(a, b, simplex, n, depth, wa, wb)) {
        // Shifting B by depth along the outward face normal frees the
        // origin from A-B, so that normal is the A-to-B contact direction.
        res.normal = n;
        res.depth = depth;
        res.pointA = wa;
        res.pointB = wb;
    } else {
        Vec3 axis = d0.normalized();
        res.normal = axis;
        SupportPoint s = minkowskiSupport(a, b, axis);
        res.depth = std::max(0.0, s.w.dot(axis));
        res.pointA = s.a;
        res.pointB = s.b;
    }
    return res;
}

} // namespace cluttergen
