#include "cluttergen/primitives.hpp"

#include <cmath>
#include <stdexcept>

namespace cluttergen {

namespace {

void recenter(TriMesh& mesh) {
    Vec3 c = mesh.bounds().center();
    for (auto& v : mesh.vertices) v -= c;
}

// Ear clipping for simple CCW polygons; O(n^2), fine for small cross sections.
std::vector<std::array<int, 3>> triangulate(const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;

    auto area2 = [&](int a, int b, int c) {
        return (poly[b] - poly[a]).cross(poly[c] - poly[a]);
    };
    auto inside = [&](int a, int b, int c, int p) {
        return area2(a, b, p) >= 0 && area2(b, c, p) >= 0 && area2(c, a, p) >= 0;
    };

    std::vector<std::array<int, 3>> tris;
    int guard = 0;
    while (idx.size() > 3) {
        if (++guard > 10000) throw std::invalid_argument("polygon triangulation failed");
        bool clipped = false;
        for (size_t i = 0; i < idx.size(); ++i) {
            int prev = idx[(i + idx.size() - 1) % idx.size()];
            int cur = idx[i];
            int next = idx[(i + 1) % idx.size()];
            if (area2(prev, cur, next) <= 1e-15) continue;  // reflex or flat
            bool ear = true;
            for (int other : idx) {
                if (other == prev || other == cur || other == next) continue;
                if (inside(prev, cur, next, other)) {
                    ear = false;
                    break;
                }
            }
            if (ear) {
                tris.push_back({prev, cur, next});
                idx.erase(idx.begin() + static_cast<long>(i));
                clipped = true;
                break;
            }
        }
        if (!clipped) throw std::invalid_argument("polygon is not simple/CCW");
    }
    tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

} // namespace

TriMesh extrudePolygon(const std::vector<Vec2>& poly, double height) {
    if (height <= 0.0) throw std::invalid_argument("extrusion height must be positive");
    auto tris = triangulate(poly);
    const int n = static_cast<int>(poly.size());

    TriMesh mesh;
    mesh.vertices.reserve(2 * n);
    for (const auto& p : poly) mesh.vertices.emplace_back(p.x, p.y, 0.0);      // bottom
    for (const auto& p : poly) mesh.vertices.emplace_back(p.x, p.y, height);  // top

    for (const auto& t : tris) {
        mesh.triangles.push_back({t[0], t[2], t[1]});              // bottom, faces -z
        mesh.triangles.push_back({t[0] + n, t[1] + n, t[2] + n});  // top, faces +z
    }
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        // CCW cross-section makes this ordering face outward.
        mesh.triangles.push_back({i, j, j + n});
        mesh.triangles.push_back({i, j + n, i + n});
    }
    recenter(mesh);
    return mesh;
}

TriMesh makeBox(double sx, double sy, double sz) {
    if (sx <= 0 || sy <= 0 || sz <= 0) throw std::invalid_argument("box sides must be positive");
    return extrudePolygon({{0, 0}, {sx, 0}, {sx, sy}, {0, sy}}, sz);
}

TriMesh makeSlab(double sx, double sy, double thickness) { return makeBox(sx, sy, thickness); }

TriMesh makeCylinder(double radius, double height, int segments) {
    if (radius <= 0 || height <= 0) throw std::invalid_argument("cylinder dims must be positive");
    if (segments < 3) throw std::invalid_argument("cylinder needs >= 3 segments");
    std::vector<Vec2> rim(segments);
    for (int i = 0; i < segments; ++i) {
        double a = 2.0 * kPi * i / segments;
        rim[i] = {radius * std::cos(a), radius * std::sin(a)};
    }
    return extrudePolygon(rim, height);
}

TriMesh makeLPrism(double sx, double sy, double legX, double legY, double height) {
    if (legX <= 0 || legY <= 0 || legX >= sx || legY >= sy)
        throw std::invalid_argument("L legs must be positive and smaller than the outer box");
    std::vector<Vec2> poly{{0, 0}, {sx, 0}, {sx, legY}, {legX, legY}, {legX, sy}, {0, sy}};
    return extrudePolygon(poly, height);
}

TriMesh makeWedge(double base, double height, double width) {
    if (base <= 0 || height <= 0 || width <= 0)
        throw std::invalid_argument("wedge dims must be positive");
    // Build the triangle in xy and extrude along z, then stand it up so the
    // base is horizontal, the vertical back is on the -x side, and the
    // hypotenuse slopes up toward it from +x.
    TriMesh prism = extrudePolygon({{0, 0}, {base, 0}, {0, height}}, width);
    Pose standUp{Quat::fromAxisAngle(Vec3::unitX(), kPi / 2.0), Vec3::zero()};
    TriMesh out = prism.transformed(standUp);
    // Snap the rotated coordinates so boxes built from the same numbers align.
    for (auto& v : out.vertices) {
        v.x = std::abs(v.x) < 1e-15 ? 0.0 : v.x;
        v.y = std::abs(v.y) < 1e-15 ? 0.0 : v.y;
        v.z = std::abs(v.z) < 1e-15 ? 0.0 : v.z;
    }
    Vec3 c = out.bounds().center();
    for (auto& v : out.vertices) v -= c;
    return out;
}

TriMesh makeSphere(double radius, int rings, int segments) {
    if (radius <= 0) throw std::invalid_argument("sphere radius must be positive");
    if (rings < 2 || segments < 3) throw std::invalid_argument("sphere tessellation too coarse");
    TriMesh mesh;
    // Poles plus (rings-1) latitude circles of `segments` points.
    mesh.vertices.emplace_back(0, 0, radius);
    for (int r = 1; r < rings; ++r) {
        double phi = kPi * r / rings;
        for (int s = 0; s < segments; ++s) {
            double theta = 2.0 * kPi * s / segments;
            mesh.vertices.emplace_back(radius * std::sin(phi) * std::cos(theta),
                                       radius * std::sin(phi) * std::sin(theta),
                                       radius * std::cos(phi));
        }
    }
    mesh.vertices.emplace_back(0, 0, -radius);
    const int top = 0;
    const int bottom = static_cast<int>(mesh.vertices.size()) - 1;
    auto at = [&](int r, int s) { return 1 + (r - 1) * segments + (s % segments); };

    for (int s = 0; s < segments; ++s) mesh.triangles.push_back({top, at(1, s), at(1, s + 1)});
    for (int r = 1; r < rings - 1; ++r) {
        for (int s = 0; s < segments; ++s) {
            int a = at(r, s), b = at(r, s + 1), c = at(r + 1, s + 1), d = at(r + 1, s);
            mesh.triangles.push_back({a, c, b});
            mesh.triangles.push_back({a, d, c});
        }
    }
    for (int s = 0; s < segments; ++s)
        mesh.triangles.push_back({bottom, at(rings - 1, s + 1), at(rings - 1, s)});
    mesh.repairWinding();
    return mesh;
}

} // namespace cluttergen
