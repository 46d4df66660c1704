#pragma once

#include <set>
#include <vector>

#include "cluttergen/geom.hpp"
#include "cluttergen/mesh.hpp"

namespace cluttergen {

struct CloudPoint {
    Vec3 position;                // world frame, meters
    Vec3 color{0.5, 0.5, 0.5};    // rgb in [0,1]
    int objectId = kBackgroundId;
};

struct PointCloud {
    std::vector<CloudPoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    // Points tagged with one object id, in original order.
    PointCloud restrictedTo(int objectId) const {
        PointCloud out;
        for (const auto& p : points)
            if (p.objectId == objectId) out.points.push_back(p);
        return out;
    }

    std::set<int> objectIds() const {
        std::set<int> ids;
        for (const auto& p : points)
            if (p.objectId != kBackgroundId) ids.insert(p.objectId);
        return ids;
    }

    void append(const PointCloud& other) {
        points.insert(points.end(), other.points.begin(), other.points.end());
    }
};

} // namespace cluttergen
