#pragma once

#include <set>
#include <vector>

#include "cluttergen/convex.hpp"
#include "cluttergen/geom.hpp"
#include "cluttergen/mesh.hpp"

namespace cluttergen {

enum class BodyMode { Static, Dynamic };

struct ContactParams {
    double frictionCoefficient = 0.5;
    double restitution = 0.0;
    int solverIterations = 16;
    double dt = 1.0 / 240.0;
};

struct Body {
    int id = 0;
    ConvexHull shape;        // collision proxy, body frame
    Pose pose;
    Vec3 linearVelocity;     // of the center of mass, world frame
    Vec3 angularVelocity;    // world frame
    double mass = 1.0;       // kg
    Mat3 inertiaBody;        // about the COM, body-frame axes
    double linearDamping = 0.0;   // s^-1, exponential velocity decay
    double angularDamping = 0.0;  // s^-1
    BodyMode mode = BodyMode::Dynamic;
    double margin = 0.001;   // collision skin, meters

    Vec3 comWorld() const { return pose.apply(shape.centroid); }
    bool dynamic() const { return mode == BodyMode::Dynamic; }
};

// Hull, mass, and inertia from a mesh at the given density (kg/m^3).
Body makeBody(int id, const TriMesh& mesh, const Pose& pose, double density = 1000.0,
              double linearDamping = 0.0, double angularDamping = 0.0,
              BodyMode mode = BodyMode::Dynamic);

struct StillTolerance {
    double v = 1e-3;       // m/s
    double omega = 1e-2;   // rad/s
};

struct SettleResult {
    std::set<int> stableIds;
    std::set<int> unstableIds;
};

// Desk-scale world: gravity defaults to a tenth of standard, the table is
// the z=0 plane with a finite rectangular footprint (support exists only
// inside it, so overhanging bodies tip off the edge).
class World {
public:
    Vec3 gravity{0.0, 0.0, -0.981};
    ContactParams contact;
    double tableHalfX = 0.5;  // footprint half-extents, meters
    double tableHalfY = 0.5;

    void addBody(Body body);           // throws on duplicate id
    bool removeBody(int id);
    const Body* find(int id) const;
    Body* find(int id);
    const std::vector<Body>& bodies() const { return bodies_; }
    std::vector<Body>& bodies() { return bodies_; }

    // One fixed-size step: contacts at current poses, gravity + exponential
    // damping, sequential impulses, then position integration with an exact
    // constant-acceleration term. A per-step displacement clamp (1 cm)
    // mitigates tunneling at extreme speeds. Static bodies are never touched.
    void step(double dt);
    void step() { step(contact.dt); }

    // Steps until every dynamic body is below the stillness tolerance or
    // maxSteps is exhausted (maxSteps 0 = classify the current state).
    // Bodies that clearly fell off the table are erased from the world and
    // reported unstable; bodies still moving at the end, or whose centroid
    // ended outside the footprint, are reported unstable but kept.
    SettleResult settle(int maxSteps, StillTolerance tol = {});

    double kineticEnergy() const;

private:
    struct ContactPoint;
    std::vector<ContactPoint> findContacts() const;
    void solve(std::vector<ContactPoint>& contacts, double dt);

    std::vector<Body> bodies_;
};

} // namespace cluttergen
