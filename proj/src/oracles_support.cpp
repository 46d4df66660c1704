#include "cluttergen/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cluttergen/sim.hpp"

namespace cluttergen {

namespace {

struct AxisBox {
    int id;
    Vec3 lo, hi;
    Vec3 centroid() const { return (lo + hi) * 0.5; }
};

// Rectangle in the table plane.
struct Patch {
    int supporter;  // body id, or -1 for the table
    double x0, x1, y0, y1;
};

// Independent monotone-chain hull over the patch corners; kept local so
// the production clipping code is never exercised here.
std::vector<Vec2> hullOf(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() <= 2) return pts;
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Vec2> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
        h[k++] = p;
    }
    std::size_t t = k + 1;
    for (auto it = pts.rbegin() + 1, lo = pts.rend(); it != lo; ++it) {
        while (k >= t && cross(h[k - 2], h[k - 1], *it) <= 0) --k;
        h[k++] = *it;
    }
    h.resize(k - 1);
    return h;
}

bool containsPoint(const std::vector<Vec2>& ccwHull, const Vec2& p) {
    if (ccwHull.empty()) return false;
    if (ccwHull.size() == 1) {
        return std::abs(ccwHull[0].x - p.x) < 1e-9 && std::abs(ccwHull[0].y - p.y) < 1e-9;
    }
    if (ccwHull.size() == 2) {
        // Segment: project and check distance.
        Vec2 d{ccwHull[1].x - ccwHull[0].x, ccwHull[1].y - ccwHull[0].y};
        Vec2 r{p.x - ccwHull[0].x, p.y - ccwHull[0].y};
        double len2 = d.x * d.x + d.y * d.y;
        double t = std::clamp((r.x * d.x + r.y * d.y) / len2, 0.0, 1.0);
        double dx = r.x - t * d.x, dy = r.y - t * d.y;
        return dx * dx + dy * dy < 1e-18;
    }
    for (std::size_t i = 0; i < ccwHull.size(); ++i) {
        const Vec2& a = ccwHull[i];
        const Vec2& b = ccwHull[(i + 1) % ccwHull.size()];
        double cr = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (cr < -1e-9) return false;
    }
    return true;
}

AxisBox toAxisBox(const Body& b) {
    std::vector<Vec3> world;
    world.reserve(b.shape.vertices.size());
    for (const auto& v : b.shape.vertices) world.push_back(b.pose.apply(v));
    if (world.size() != 8)
        throw std::invalid_argument("support oracle requires axis-aligned boxes (body " +
                                    std::to_string(b.id) + " has " +
                                    std::to_string(world.size()) + " hull vertices)");
    AxisBox box{b.id, world[0], world[0]};
    for (const auto& w : world) {
        box.lo = Vec3{std::min(box.lo.x, w.x), std::min(box.lo.y, w.y), std::min(box.lo.z, w.z)};
        box.hi = Vec3{std::max(box.hi.x, w.x), std::max(box.hi.y, w.y), std::max(box.hi.z, w.z)};
    }
    // Every hull vertex must coincide with a distinct corner of the bounds.
    std::vector<bool> cornerUsed(8, false);
    for (const auto& w : world) {
        bool matched = false;
        for (int c = 0; c < 8; ++c) {
            if (cornerUsed[c]) continue;
            Vec3 corner{(c & 1) ? box.hi.x : box.lo.x, (c & 2) ? box.hi.y : box.lo.y,
                        (c & 4) ? box.hi.z : box.lo.z};
            if ((w - corner).norm() < 1e-7) {
                cornerUsed[c] = true;
                matched = true;
                break;
            }
        }
        if (!matched)
            throw std::invalid_argument("support oracle requires axis-aligned boxes (body " +
                                        std::to_string(b.id) + " is rotated or not a box)");
    }
    return box;
}

} // namespace

std::map<int, std::set<int>> supportOracle(const World& world) {
    constexpr double kContactTol = 0.004;  // vertical adjacency slack, m
    constexpr double kMinOverlap = 1e-5;   // patch side length floor, m

    std::vector<AxisBox> boxes;
    for (const auto& b : world.bodies()) boxes.push_back(toAxisBox(b));

    std::map<int, std::set<int>> parents;
    for (const auto& a : boxes) {
        parents[a.id] = {};

        std::vector<Patch> supports;
        if (a.lo.z <= kContactTol) {
            supports.push_back(Patch{-1, a.lo.x, a.hi.x, a.lo.y, a.hi.y});
        }
        for (const auto& b : boxes) {
            if (b.id == a.id) continue;
            if (std::abs(a.lo.z - b.hi.z) > kContactTol) continue;
            double x0 = std::max(a.lo.x, b.lo.x), x1 = std::min(a.hi.x, b.hi.x);
            double y0 = std::max(a.lo.y, b.lo.y), y1 = std::min(a.hi.y, b.hi.y);
            if (x1 - x0 < kMinOverlap || y1 - y0 < kMinOverlap) continue;
            supports.push_back(Patch{b.id, x0, x1, y0, y1});
        }

        Vec2 c{a.centroid().x, a.centroid().y};
        for (const auto& removed : supports) {
            if (removed.supporter < 0) continue;  // the table cannot be deleted
            std::vector<Vec2> corners;
            for (const auto& s : supports) {
                if (s.supporter == removed.supporter) continue;
                corners.push_back(Vec2{s.x0, s.y0});
                corners.push_back(Vec2{s.x1, s.y0});
                corners.push_back(Vec2{s.x1, s.y1});
                corners.push_back(Vec2{s.x0, s.y1});
            }
            if (!containsPoint(hullOf(std::move(corners)), c))
                parents[a.id].insert(removed.supporter);
        }
    }
    return parents;
}

} // namespace cluttergen
