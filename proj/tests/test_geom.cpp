#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "cluttergen/camera.hpp"
#include "cluttergen/convex.hpp"
#include "cluttergen/geom.hpp"
#include "cluttergen/mesh.hpp"
#include "cluttergen/mesh_io.hpp"
#include "cluttergen/oracles.hpp"
#include "cluttergen/primitives.hpp"
#include "cluttergen/rng.hpp"

using namespace cluttergen;

namespace {

Pose randomPose(Rng& rng) {
    return {rng.uniformQuat(),
            {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}};
}

// Closed-manifold check: every undirected edge is shared by exactly two
// triangles, once in each direction.
bool isWatertight(const TriMesh& mesh) {
    std::set<std::pair<int, int>> directed;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            auto edge = std::make_pair(t[k], t[(k + 1) % 3]);
            if (!directed.insert(edge).second) return false;  // repeated directed edge
        }
    }
    for (const auto& e : directed) {
        if (!directed.count({e.second, e.first})) return false;  // missing twin
    }
    return true;
}

double meshVolume(const TriMesh& mesh) {
    double vol = 0.0;
    for (size_t f = 0; f < mesh.triangles.size(); ++f) {
        const auto& t = mesh.triangles[f];
        vol += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]])) / 6.0;
    }
    return vol;
}

} // namespace

TEST_CASE("pose algebra") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        Pose p = randomPose(rng);
        CHECK(p.rotation.norm() == doctest::Approx(1.0).epsilon(1e-9));

        Pose id = p * p.inverse();
        CHECK(id.translation.norm() < 1e-9);
        CHECK(id.rotation.angle() < 1e-9);

        Pose q = randomPose(rng), r = randomPose(rng);
        Pose lhs = (p * q) * r;
        Pose rhs = p * (q * r);
        auto d = poseDelta(lhs, rhs);
        CHECK(d.translation < 1e-9);
        CHECK(d.rotationAngle < 1e-9);

        auto dl = poseDelta(Pose::identity() * p, p);
        auto dr = poseDelta(p * Pose::identity(), p);
        CHECK(dl.translation < 1e-12);
        CHECK(dl.rotationAngle < 1e-9);
        CHECK(dr.translation < 1e-12);
        CHECK(dr.rotationAngle < 1e-9);
    }
}

TEST_CASE("pose delta") {
    Pose a;
    auto d0 = poseDelta(a, a);
    CHECK(d0.translation == 0.0);
    CHECK(d0.rotationAngle == 0.0);

    Pose b{Quat::identity(), {0.03, 0, 0}};
    auto d1 = poseDelta(a, b);
    CHECK(d1.translation == doctest::Approx(0.03));
    CHECK(d1.rotationAngle == doctest::Approx(0.0));

    Pose c{Quat::fromAxisAngle(Vec3::unitZ(), kPi / 2), {}};
    auto d2 = poseDelta(a, c);
    CHECK(d2.translation == doctest::Approx(0.0));
    CHECK(d2.rotationAngle == doctest::Approx(kPi / 2).epsilon(1e-9));
}

TEST_CASE("quaternion from matrix roundtrip") {
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        Quat q = rng.uniformQuat();
        Quat back = Quat::fromMatrix(q.toMatrix());
        Quat rel = q.conjugate() * back;
        CHECK(rel.angle() < 1e-9);
    }
}

TEST_CASE("pinhole projection") {
    PinholeCamera cam;
    cam.fx = cam.fy = 100.0;
    cam.cx = cam.cy = 64.0;
    cam.width = cam.height = 128;
    cam.validate();

    auto p0 = projectPoint(cam, {0, 0, 1});
    CHECK(p0.pixel.x == doctest::Approx(64.0));
    CHECK(p0.pixel.y == doctest::Approx(64.0));
    CHECK(p0.depth == doctest::Approx(1.0));

    auto p1 = projectPoint(cam, {0.1, 0, 1});
    CHECK(p1.pixel.x == doctest::Approx(74.0));
    CHECK(p1.pixel.y == doctest::Approx(64.0));

    CHECK(backprojectPixel(cam, {64, 64}, 2.0).z == doctest::Approx(2.0));
    Vec3 bp = backprojectPixel(cam, {74, 64}, 1.0);
    CHECK(bp.x == doctest::Approx(0.1));
    CHECK(bp.y == doctest::Approx(0.0));
    CHECK(bp.z == doctest::Approx(1.0));

    CHECK_THROWS_AS(projectPoint(cam, {0, 0, -1}), BehindCameraError);
    CHECK_THROWS_AS(projectPoint(cam, {0, 0, 0}), BehindCameraError);
    CHECK_THROWS_AS(backprojectPixel(cam, {10, 10}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(backprojectPixel(cam, {10, 10}, -1.0), std::invalid_argument);
}

TEST_CASE("projection roundtrips under random extrinsics") {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        PinholeCamera cam;
        cam.fx = rng.uniform(200, 600);
        cam.fy = rng.uniform(200, 600);
        cam.cx = 160;
        cam.cy = 120;
        cam.width = 320;
        cam.height = 240;
        cam.pose = randomPose(rng);

        Vec3 local{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(0.2, 3.0)};
        Vec3 world = cam.pose.apply(local);
        auto pd = projectPoint(cam, world);
        Vec3 back = backprojectPixel(cam, pd.pixel, pd.depth);
        CHECK((back - world).norm() < 1e-9);

        Vec2 px{rng.uniform(0, 320), rng.uniform(0, 240)};
        double depth = rng.uniform(0.1, 4.0);
        auto again = projectPoint(cam, backprojectPixel(cam, px, depth));
        CHECK(std::abs(again.pixel.x - px.x) < 1e-6);
        CHECK(std::abs(again.pixel.y - px.y) < 1e-6);
        CHECK(again.depth == doctest::Approx(depth).epsilon(1e-9));
    }
}

TEST_CASE("look-at camera orientation") {
    Pose p = lookAtPose({0, 0, 0.8}, {0, 0, 0});
    Vec3 axis = p.rotate(Vec3::unitZ());
    CHECK((axis - Vec3{0, 0, -1}).norm() < 1e-12);

    // Rotation must stay proper (det +1) for arbitrary viewpoints.
    Rng rng(14);
    for (int i = 0; i < 100; ++i) {
        Vec3 eye{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.2, 1.5)};
        Pose q = lookAtPose(eye, {0, 0, 0});
        CHECK(q.rotation.toMatrix().determinant() == doctest::Approx(1.0).epsilon(1e-9));
        Vec3 f = q.rotate(Vec3::unitZ());
        CHECK((f - (Vec3{0, 0, 0} - eye).normalized()).norm() < 1e-9);
    }
}

TEST_CASE("mesh validation") {
    TriMesh m = makeBox(0.1, 0.1, 0.1);
    CHECK_NOTHROW(m.validate());

    TriMesh empty;
    empty.vertices = m.vertices;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);

    TriMesh bad = m;
    bad.triangles[0][1] = 99;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    TriMesh flat = m;
    flat.triangles.push_back({0, 0, 1});
    CHECK_THROWS_AS(flat.validate(), std::invalid_argument);
}

TEST_CASE("longest extent") {
    CHECK(longestExtent(makeBox(0.2, 0.1, 0.05)) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(longestExtent(makeSphere(1.0)) == doctest::Approx(2.0).epsilon(1e-2));

    TriMesh box = makeBox(0.2, 0.1, 0.05);
    double k = 3.7;
    CHECK(longestExtent(box.scaled(k)) ==
          doctest::Approx(k * longestExtent(box)).epsilon(1e-9));

    TriMesh none;
    CHECK_THROWS_AS(longestExtent(none), std::invalid_argument);
}

TEST_CASE("ray vs mesh basics") {
    TriMesh cube = makeBox(1.0, 1.0, 1.0);
    Pose at{Quat::identity(), {0, 0, 1.5}};  // cube spans z in [1, 2]

    auto hit = rayMeshIntersect({0, 0, 0}, {0, 0, 1}, cube, at);
    REQUIRE(hit.has_value());
    CHECK(hit->distance == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hit->faceNormal.dot(Vec3{0, 0, 1}) < 0.0);  // oriented against the ray

    CHECK(!rayMeshIntersect({0, 0, 0}, {0, 0, -1}, cube, at).has_value());
    CHECK_THROWS_AS(rayMeshIntersect({0, 0, 0}, {0, 0, 2}, cube, at),
                    std::invalid_argument);
}

TEST_CASE("ray casting agrees with the exhaustive oracle") {
    TriMesh mesh = makeLPrism(0.2, 0.16, 0.08, 0.07, 0.12);
    MeshBvh bvh(mesh);
    Rng rng(15);
    Pose pose = randomPose(rng);

    Vec3 aim = pose.apply(mesh.bounds().center());
    int hits = 0;
    for (int i = 0; i < 1000; ++i) {
        Vec3 origin{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        // Mostly aimed rays (wide jitter keeps grazing cases), some fully random.
        Vec3 jitter{rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15),
                    rng.uniform(-0.15, 0.15)};
        Vec3 dir = i % 5 == 0
                       ? Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}
                       : (aim + jitter - origin);
        if (dir.norm() < 1e-6) continue;
        dir = dir.normalized();

        auto expect = oracleRayMesh(origin, dir, mesh, pose);
        auto got = rayMeshIntersect(origin, dir, mesh, pose);
        REQUIRE(expect.has_value() == got.has_value());
        if (expect) {
            ++hits;
            CHECK(got->distance == doctest::Approx(*expect).epsilon(1e-9));
        }

        // The BVH answers the same query in the mesh frame.
        Vec3 lo = pose.applyInverse(origin);
        Vec3 ld = pose.rotation.conjugate().rotate(dir);
        auto fast = bvh.raycast(lo, ld);
        REQUIRE(fast.has_value() == expect.has_value());
        if (expect) CHECK(fast->t == doctest::Approx(*expect).epsilon(1e-9));
    }
    CHECK(hits > 50);  // the sampling box actually exercises hits
}

TEST_CASE("ray hit distance is rigid-invariant") {
    TriMesh mesh = makeCylinder(0.05, 0.12);
    Rng rng(16);
    for (int i = 0; i < 100; ++i) {
        Vec3 origin{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Vec3 dir = Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (dir.norm() < 1e-6) continue;
        dir = dir.normalized();
        auto base = rayMeshIntersect(origin, dir, mesh, Pose::identity());

        Pose rig = randomPose(rng);
        auto moved = rayMeshIntersect(rig.apply(origin), rig.rotate(dir), mesh, rig);
        REQUIRE(base.has_value() == moved.has_value());
        if (base) CHECK(moved->distance == doctest::Approx(base->distance).epsilon(1e-9));
    }
}

TEST_CASE("bvh closest point") {
    TriMesh box = makeBox(0.2, 0.2, 0.2);
    MeshBvh bvh(box);

    auto cp = bvh.closestPoint({0.0, 0.0, 0.5});
    CHECK(std::sqrt(cp.distSq) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(cp.point.z == doctest::Approx(0.1).epsilon(1e-12));

    // Interior query still returns a surface point.
    auto inner = bvh.closestPoint({0.0, 0.0, 0.0});
    CHECK(std::sqrt(inner.distSq) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("primitives are watertight with outward winding") {
    std::vector<TriMesh> shapes{makeBox(0.1, 0.15, 0.08), makeCylinder(0.05, 0.1, 20),
                                makeSlab(0.18, 0.12, 0.02),
                                makeLPrism(0.2, 0.16, 0.08, 0.07, 0.1),
                                makeWedge(0.1, 0.14, 0.06), makeSphere(0.07)};
    for (const auto& m : shapes) {
        CHECK_NOTHROW(m.validate());
        CHECK(isWatertight(m));
        CHECK(meshVolume(m) > 0.0);  // net outward winding
        Vec3 c = m.bounds().center();
        CHECK(c.norm() < 1e-12);
    }

    CHECK(meshVolume(makeBox(0.1, 0.15, 0.08)) == doctest::Approx(0.1 * 0.15 * 0.08));
    CHECK(meshVolume(makeWedge(0.1, 0.14, 0.06)) == doctest::Approx(0.5 * 0.1 * 0.14 * 0.06));
    CHECK(meshVolume(makeCylinder(0.05, 0.1, 64)) ==
          doctest::Approx(kPi * 0.05 * 0.05 * 0.1).epsilon(5e-3));
}

TEST_CASE("winding repair flips inward faces") {
    TriMesh box = makeBox(0.1, 0.1, 0.1);
    TriMesh broken = box;
    for (size_t i = 0; i < broken.triangles.size(); i += 2)
        std::swap(broken.triangles[i][1], broken.triangles[i][2]);
    CHECK(meshVolume(broken) < meshVolume(box));
    broken.repairWinding();
    CHECK(meshVolume(broken) == doctest::Approx(meshVolume(box)).epsilon(1e-12));
}

TEST_CASE("convex hull of a cube with interior noise") {
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i)
        pts.emplace_back((i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5);
    Rng rng(17);
    for (int i = 0; i < 200; ++i)
        pts.emplace_back(rng.uniform(-0.49, 0.49), rng.uniform(-0.49, 0.49),
                         rng.uniform(-0.49, 0.49));

    ConvexHull hull = computeConvexHull(pts);
    CHECK(hull.vertices.size() == 8);
    CHECK(hull.volume == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hull.centroid.norm() < 1e-9);
    // Unit cube, density 1: inertia diag = m*(1+1)/12 = 1/6.
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            double expect = r == c ? 1.0 / 6.0 : 0.0;
            CHECK(hull.unitInertia.m[r][c] == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("convex hull contains its input") {
    Rng rng(18);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec3> pts;
        int n = 10 + static_cast<int>(rng.uniformIndex(100));
        for (int i = 0; i < n; ++i)
            pts.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        ConvexHull hull;
        try {
            hull = computeConvexHull(pts);
        } catch (const std::invalid_argument&) {
            continue;  // degenerate draw
        }

        // Every input point is behind every face plane (within tolerance).
        for (const auto& f : hull.faces) {
            Vec3 a = hull.vertices[f[0]];
            Vec3 n4 = (hull.vertices[f[1]] - a).cross(hull.vertices[f[2]] - a).normalized();
            for (const auto& p : pts) CHECK(n4.dot(p - a) < 1e-7);
        }

        // Support function equals brute-force max over inputs.
        for (int i = 0; i < 20; ++i) {
            Vec3 d = Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            if (d.norm() < 1e-6) continue;
            double brute = -1e300;
            for (const auto& p : pts) brute = std::max(brute, p.dot(d));
            CHECK(hull.support(d).dot(d) == doctest::Approx(brute).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(computeConvexHull(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(computeConvexHull(std::vector<Vec3>{
                        {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.3, 0.4, 0}}),
                    std::invalid_argument);  // coplanar
}

TEST_CASE("hull volume matches primitive volume") {
    TriMesh cyl = makeCylinder(0.05, 0.1, 32);
    ConvexHull hull = computeConvexHull(cyl);
    CHECK(hull.volume == doctest::Approx(meshVolume(cyl)).epsilon(1e-9));

    TriMesh wedge = makeWedge(0.1, 0.12, 0.05);
    CHECK(computeConvexHull(wedge).volume ==
          doctest::Approx(meshVolume(wedge)).epsilon(1e-9));
}

TEST_CASE("obj import") {
    const char* path = "test_geom_tmp.obj";
    {
        std::ofstream out(path);
        out << "# tiny tetrahedron\n"
               "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
               "f 1 3 2\nf 1 2 4\nf 1 4 3\nf 2 3 4\n";
    }
    TriMesh m = loadMesh(path);
    std::remove(path);
    CHECK(m.vertices.size() == 4);
    CHECK(m.triangles.size() == 4);
    CHECK(isWatertight(m));
    CHECK(meshVolume(m) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    CHECK_THROWS_AS(loadMesh("no_such_file.obj"), std::runtime_error);
    CHECK_THROWS_AS(loadMesh("bad_extension.xyz"), std::runtime_error);
}

TEST_CASE("binary stl import") {
    // One-facet STL is not a closed mesh but exercises parsing + welding.
    const char* path = "test_geom_tmp.stl";
    {
        std::ofstream out(path, std::ios::binary);
        char header[80] = {};
        out.write(header, 80);
        uint32_t count = 2;
        out.write(reinterpret_cast<char*>(&count), 4);
        float tri1[12] = {0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0};
        float tri2[12] = {0, 0, -1, 0, 0, 0, 0, 1, 0, 1, 0, 0};
        uint16_t attr = 0;
        out.write(reinterpret_cast<char*>(tri1), 48);
        out.write(reinterpret_cast<char*>(&attr), 2);
        out.write(reinterpret_cast<char*>(tri2), 48);
        out.write(reinterpret_cast<char*>(&attr), 2);
    }
    TriMesh m = loadMesh(path);
    std::remove(path);
    CHECK(m.vertices.size() == 3);  // shared corners welded
    CHECK(m.triangles.size() == 2);
}

TEST_CASE("ply cloud roundtrip") {
    PointCloud cloud;
    Rng rng(19);
    for (int i = 0; i < 500; ++i) {
        CloudPoint p;
        p.position = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 2)};
        p.color = {rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)};
        p.objectId = i % 7 == 0 ? kBackgroundId : static_cast<int>(i % 5);
        cloud.points.push_back(p);
    }

    const char* path = "test_geom_tmp.ply";
    writeCloudPly(path, cloud);
    PointCloud back = readCloudPly(path);
    std::remove(path);

    REQUIRE(back.points.size() == cloud.points.size());
    for (size_t i = 0; i < cloud.points.size(); ++i) {
        CHECK((back.points[i].position - cloud.points[i].position).norm() < 1e-6);
        CHECK((back.points[i].color - cloud.points[i].color).norm() < 2.0 / 255.0);
        CHECK(back.points[i].objectId == cloud.points[i].objectId);
    }
}

TEST_CASE("rng determinism and sampling") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    Rng c(7);
    auto idx = c.sampleWithoutReplacement(100, 10);
    CHECK(idx.size() == 10);
    std::set<int> uniq(idx.begin(), idx.end());
    CHECK(uniq.size() == 10);
    for (int i : idx) {
        CHECK(i >= 0);
        CHECK(i < 100);
    }

    CHECK(deriveSeed(42, 0) != deriveSeed(42, 1));
    CHECK(deriveSeed(42, 3) == deriveSeed(42, 3));

    // Uniform quaternions are unit length.
    Rng d(9);
    for (int i = 0; i < 100; ++i)
        CHECK(d.uniformQuat().norm() == doctest::Approx(1.0).epsilon(1e-12));
}
