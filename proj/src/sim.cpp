#include "cluttergen/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cluttergen/narrowphase.hpp"

namespace cluttergen {

namespace {

constexpr double kSlop = 5e-4;          // allowed penetration, meters
constexpr double kBaumgarte = 0.2;      // position-error feedback fraction
constexpr double kMaxBiasVel = 0.1;     // m/s cap on recovery pushes
constexpr double kMaxStepDisp = 0.01;   // m per step, tunneling clamp
constexpr double kPatchTol = 2e-4;      // support-patch thickness, meters

// 2D convex hull (monotone chain), CCW, degenerate inputs pass through.
std::vector<Vec2> hull2D(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) {
                              return (a - b).squaredNorm() < 1e-16;
                          }),
              pts.end());
    const int n = static_cast<int>(pts.size());
    if (n <= 2) return pts;
    std::vector<Vec2> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && (h[k - 1] - h[k - 2]).cross(pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) {
        while (k >= lower && (h[k - 1] - h[k - 2]).cross(pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// Clip a segment against a CCW convex polygon's half-planes.
std::vector<Vec2> clipSegmentPoly(const Vec2& s0, const Vec2& s1, const std::vector<Vec2>& poly) {
    double t0 = 0.0, t1 = 1.0;
    Vec2 d = s1 - s0;
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        Vec2 e = poly[(i + 1) % n] - poly[i];
        // inside = left of the edge
        double num = e.cross(s0 - poly[i]);
        double den = e.cross(d);
        if (std::abs(den) < 1e-14) {
            if (num < -1e-12) return {};  // parallel and outside
            continue;
        }
        double t = -num / den;
        if (den > 0) t0 = std::max(t0, t);  // entering
        else t1 = std::min(t1, t);          // leaving
        if (t0 > t1) return {};
    }
    if (t1 - t0 < 1e-12) return {s0 + d * (0.5 * (t0 + t1))};
    return {s0 + d * t0, s0 + d * t1};
}

std::vector<Vec2> clipPolyPoly(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip) {
    std::vector<Vec2> out = subject;
    const int n = static_cast<int>(clip.size());
    for (int i = 0; i < n && !out.empty(); ++i) {
        Vec2 a = clip[i], b = clip[(i + 1) % n];
        Vec2 e = b - a;
        std::vector<Vec2> in = std::move(out);
        out.clear();
        const int m = static_cast<int>(in.size());
        for (int j = 0; j < m; ++j) {
            const Vec2& p = in[j];
            const Vec2& q = in[(j + 1) % m];
            double sp = e.cross(p - a);
            double sq = e.cross(q - a);
            if (sp >= -1e-12) out.push_back(p);
            if ((sp >= -1e-12) != (sq >= -1e-12)) {
                double t = sp / (sp - sq);
                out.push_back(p + (q - p) * t);
            }
        }
    }
    return out;
}

// Intersection of two (possibly degenerate) convex patches in 2D.
std::vector<Vec2> intersectPatches(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() == 1 || b.size() == 1) return a.size() == 1 ? a : b;
    if (a.size() == 2 && b.size() == 2) {
        Vec2 da = a[1] - a[0], db = b[1] - b[0];
        double den = da.cross(db);
        if (std::abs(den) < 1e-12) {
            // Parallel contact edges: overlap interval along a's direction.
            double len2 = da.squaredNorm();
            if (len2 < 1e-16) return {a[0]};
            double u0 = 0.0, u1 = 1.0;
            double p0 = (b[0] - a[0]).dot(da) / len2;
            double p1 = (b[1] - a[0]).dot(da) / len2;
            double lo = std::max(u0, std::min(p0, p1));
            double hi = std::min(u1, std::max(p0, p1));
            if (lo > hi) return {a[0] + da * std::clamp(p0, 0.0, 1.0)};
            return {a[0] + da * lo, a[0] + da * hi};
        }
        double t = (b[0] - a[0]).cross(db) / den;
        return {a[0] + da * std::clamp(t, 0.0, 1.0)};
    }
    if (a.size() == 2) return clipSegmentPoly(a[0], a[1], b);
    if (b.size() == 2) return clipSegmentPoly(b[0], b[1], a);
    return clipPolyPoly(a, b);
}

Mat3 invInertiaWorld(const Body& b) {
    if (!b.dynamic()) return Mat3::zeroes();
    Mat3 r = b.pose.rotation.toMatrix();
    return r * b.inertiaBody.inverse() * r.transposed();
}

} // namespace

Body makeBody(int id, const TriMesh& mesh, const Pose& pose, double density,
              double linearDamping, double angularDamping, BodyMode mode) {
    Body b;
    b.id = id;
    b.shape = computeConvexHull(mesh);
    b.pose = pose;
    b.mass = density * b.shape.volume;
    b.inertiaBody = b.shape.unitInertia * density;
    b.linearDamping = linearDamping;
    b.angularDamping = angularDamping;
    b.mode = mode;
    return b;
}

struct World::ContactPoint {
    int a = -1;  // body index; -1 = table
    int b = -1;
    Vec3 point;
    Vec3 normal;  // from a to b
    double penetration = 0.0;
    // solver state
    Vec3 rA, rB, t1, t2;
    double massN = 0, massT1 = 0, massT2 = 0;
    double bias = 0;
    double accumN = 0, accumT1 = 0, accumT2 = 0;
};

void World::addBody(Body body) {
    if (find(body.id)) throw std::invalid_argument("duplicate body id");
    if (body.dynamic() && body.mass <= 0.0)
        throw std::invalid_argument("dynamic body must have positive mass");
    bodies_.push_back(std::move(body));
}

bool World::removeBody(int id) {
    for (size_t i = 0; i < bodies_.size(); ++i) {
        if (bodies_[i].id == id) {
            bodies_.erase(bodies_.begin() + static_cast<long>(i));
            return true;
        }
    }
    return false;
}

const Body* World::find(int id) const {
    for (const auto& b : bodies_)
        if (b.id == id) return &b;
    return nullptr;
}

Body* World::find(int id) {
    for (auto& b : bodies_)
        if (b.id == id) return &b;
    return nullptr;
}

std::vector<World::ContactPoint> World::findContacts() const {
    std::vector<ContactPoint> contacts;
    const int n = static_cast<int>(bodies_.size());

    std::vector<Aabb> boxes(n);
    std::vector<std::vector<Vec3>> worldVerts(n);
    for (int i = 0; i < n; ++i) {
        worldVerts[i].reserve(bodies_[i].shape.vertices.size());
        for (const auto& v : bodies_[i].shape.vertices) {
            Vec3 w = bodies_[i].pose.apply(v);
            worldVerts[i].push_back(w);
            boxes[i].expand(w);
        }
        double skin = bodies_[i].margin + kSlop + 0.002;
        boxes[i].lo -= {skin, skin, skin};
        boxes[i].hi += {skin, skin, skin};
    }

    // Table contacts: hull vertices near the plane and inside the footprint.
    for (int i = 0; i < n; ++i) {
        const Body& body = bodies_[i];
        if (!body.dynamic()) continue;
        for (const auto& w : worldVerts[i]) {
            if (w.z < body.margin && std::abs(w.x) <= tableHalfX &&
                std::abs(w.y) <= tableHalfY) {
                ContactPoint c;
                c.a = -1;
                c.b = i;
                c.point = {w.x, w.y, std::min(w.z, 0.0)};
                c.normal = Vec3::unitZ();
                c.penetration = body.margin - w.z;
                contacts.push_back(c);
            }
        }
    }

    // Body pairs.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Body& A = bodies_[i];
            const Body& B = bodies_[j];
            if (!A.dynamic() && !B.dynamic()) continue;
            if (!boxes[i].overlaps(boxes[j])) continue;

            DistanceResult dr = convexDistance(A.shape, A.pose, B.shape, B.pose);
            double marginSum = A.margin + B.margin;
            double gap = dr.intersecting ? -dr.depth : dr.distance;
            double pen = marginSum - gap;
            if (pen <= 0.0) continue;

            Vec3 nrm = dr.normal;
            Vec3 mid = (dr.pointA + dr.pointB) * 0.5;

            // Support patches along the contact normal, projected to 2D.
            Vec3 u1 = std::abs(nrm.x) < 0.7 ? nrm.cross(Vec3::unitX()).normalized()
                                            : nrm.cross(Vec3::unitY()).normalized();
            Vec3 u2 = nrm.cross(u1);

            auto patch2D = [&](int bodyIdx, const Vec3& dir) {
                double best = -1e300;
                for (const auto& w : worldVerts[bodyIdx]) best = std::max(best, w.dot(dir));
                std::vector<Vec2> out;
                for (const auto& w : worldVerts[bodyIdx])
                    if (w.dot(dir) >= best - kPatchTol) out.push_back({w.dot(u1), w.dot(u2)});
                return hull2D(std::move(out));
            };

            std::vector<Vec2> clipped =
                intersectPatches(patch2D(i, nrm), patch2D(j, -nrm));

            auto push = [&](const Vec3& p) {
                ContactPoint c;
                c.a = i;
                c.b = j;
                c.point = p;
                c.normal = nrm;
                c.penetration = pen;
                contacts.push_back(c);
            };
            if (clipped.empty()) {
                push(mid);
            } else {
                double nOffset = mid.dot(nrm);
                for (const auto& q : clipped)
                    push(u1 * q.x + u2 * q.y + nrm * nOffset);
            }
        }
    }
    return contacts;
}

void World::solve(std::vector<ContactPoint>& contacts, double dt) {
    std::vector<Mat3> invI(bodies_.size());
    std::vector<double> invM(bodies_.size());
    std::vector<Vec3> com(bodies_.size());
    for (size_t i = 0; i < bodies_.size(); ++i) {
        invI[i] = invInertiaWorld(bodies_[i]);
        invM[i] = bodies_[i].dynamic() ? 1.0 / bodies_[i].mass : 0.0;
        com[i] = bodies_[i].comWorld();
    }

    auto velocityAt = [&](int idx, const Vec3& r) -> Vec3 {
        if (idx < 0) return Vec3::zero();
        const Body& b = bodies_[idx];
        if (!b.dynamic()) return Vec3::zero();
        return b.linearVelocity + b.angularVelocity.cross(r);
    };
    auto applyImpulse = [&](int idx, const Vec3& r, const Vec3& imp) {
        if (idx < 0) return;
        Body& b = bodies_[idx];
        if (!b.dynamic()) return;
        b.linearVelocity += imp * invM[idx];
        b.angularVelocity += invI[idx] * r.cross(imp);
    };
    auto effMass = [&](int ia, int ib, const Vec3& rA, const Vec3& rB, const Vec3& axis) {
        double k = 0.0;
        if (ia >= 0 && bodies_[ia].dynamic()) {
            Vec3 t = invI[ia] * rA.cross(axis);
            k += invM[ia] + axis.dot(t.cross(rA));
        }
        if (ib >= 0 && bodies_[ib].dynamic()) {
            Vec3 t = invI[ib] * rB.cross(axis);
            k += invM[ib] + axis.dot(t.cross(rB));
        }
        return k > 1e-12 ? 1.0 / k : 0.0;
    };

    for (auto& c : contacts) {
        c.rA = c.a >= 0 ? c.point - com[c.a] : Vec3::zero();
        c.rB = c.point - com[c.b];
        c.t1 = std::abs(c.normal.x) < 0.7 ? c.normal.cross(Vec3::unitX()).normalized()
                                          : c.normal.cross(Vec3::unitY()).normalized();
        c.t2 = c.normal.cross(c.t1);
        c.massN = effMass(c.a, c.b, c.rA, c.rB, c.normal);
        c.massT1 = effMass(c.a, c.b, c.rA, c.rB, c.t1);
        c.massT2 = effMass(c.a, c.b, c.rA, c.rB, c.t2);
        c.bias = std::min(kMaxBiasVel,
                          kBaumgarte / dt * std::max(0.0, c.penetration - kSlop));
        if (contact.restitution > 0.0) {
            double vn = c.normal.dot(velocityAt(c.b, c.rB) - velocityAt(c.a, c.rA));
            if (vn < -0.1) c.bias = std::max(c.bias, -contact.restitution * vn);
        }
    }

    for (int iter = 0; iter < contact.solverIterations; ++iter) {
        for (auto& c : contacts) {
            Vec3 rel = velocityAt(c.b, c.rB) - velocityAt(c.a, c.rA);
            double vn = c.normal.dot(rel);
            double dLambda = -(vn - c.bias) * c.massN;
            double fresh = std::max(0.0, c.accumN + dLambda);
            dLambda = fresh - c.accumN;
            c.accumN = fresh;
            Vec3 imp = c.normal * dLambda;
            applyImpulse(c.a, c.rA, -imp);
            applyImpulse(c.b, c.rB, imp);

            double maxFriction = contact.frictionCoefficient * c.accumN;
            rel = velocityAt(c.b, c.rB) - velocityAt(c.a, c.rA);
            double vt1 = c.t1.dot(rel);
            double dT1 = -vt1 * c.massT1;
            double freshT1 = std::clamp(c.accumT1 + dT1, -maxFriction, maxFriction);
            dT1 = freshT1 - c.accumT1;
            c.accumT1 = freshT1;
            Vec3 impT1 = c.t1 * dT1;
            applyImpulse(c.a, c.rA, -impT1);
            applyImpulse(c.b, c.rB, impT1);

            rel = velocityAt(c.b, c.rB) - velocityAt(c.a, c.rA);
            double vt2 = c.t2.dot(rel);
            double dT2 = -vt2 * c.massT2;
            double freshT2 = std::clamp(c.accumT2 + dT2, -maxFriction, maxFriction);
            dT2 = freshT2 - c.accumT2;
            c.accumT2 = freshT2;
            Vec3 impT2 = c.t2 * dT2;
            applyImpulse(c.a, c.rA, -impT2);
            applyImpulse(c.b, c.rB, impT2);
        }
    }
}

void World::step(double dt) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");

    auto contacts = findContacts();

    for (auto& b : bodies_) {
        if (!b.dynamic()) continue;
        b.linearVelocity += gravity * dt;
        if (b.linearDamping > 0.0) b.linearVelocity *= std::exp(-b.linearDamping * dt);
        if (b.angularDamping > 0.0) b.angularVelocity *= std::exp(-b.angularDamping * dt);
    }

    solve(contacts, dt);

    std::vector<char> touched(bodies_.size(), 0);
    for (const auto& c : contacts) {
        if (c.a >= 0) touched[c.a] = 1;
        touched[c.b] = 1;
    }

    for (size_t i = 0; i < bodies_.size(); ++i) {
        Body& b = bodies_[i];
        if (!b.dynamic()) continue;

        double speed = b.linearVelocity.norm();
        if (speed * dt > kMaxStepDisp) b.linearVelocity *= kMaxStepDisp / (speed * dt);

        // Contact-free bodies integrate the ballistic arc exactly:
        // x(t+dt) = x + v_old*dt + g*dt^2/2 written with the updated
        // velocity. Contacted bodies skip the correction (their velocity
        // is no longer v_old + g*dt, and resting contact must not drift).
        Vec3 com = b.comWorld();
        com += b.linearVelocity * dt;
        if (!touched[i]) com -= gravity * (0.5 * dt * dt);

        Quat q = b.pose.rotation;
        const Vec3& w = b.angularVelocity;
        Quat dq = Quat{0.0, w.x, w.y, w.z} * q;
        q = Quat{q.w + 0.5 * dq.w * dt, q.x + 0.5 * dq.x * dt, q.y + 0.5 * dq.y * dt,
                 q.z + 0.5 * dq.z * dt}
                .normalized();

        b.pose.rotation = q;
        b.pose.translation = com - q.rotate(b.shape.centroid);
    }
}

SettleResult World::settle(int maxSteps, StillTolerance tol) {
    SettleResult res;

    auto clearlyFallen = [&](const Body& b) {
        Vec3 c = b.comWorld();
        return c.z < -0.005 || std::abs(c.x) > tableHalfX + 0.02 ||
               std::abs(c.y) > tableHalfY + 0.02;
    };
    auto sweepFallen = [&]() {
        for (size_t i = 0; i < bodies_.size();) {
            if (bodies_[i].dynamic() && clearlyFallen(bodies_[i])) {
                res.unstableIds.insert(bodies_[i].id);
                bodies_.erase(bodies_.begin() + static_cast<long>(i));
            } else {
                ++i;
            }
        }
    };
    auto allStill = [&]() {
        for (const auto& b : bodies_) {
            if (!b.dynamic()) continue;
            if (b.linearVelocity.norm() > tol.v || b.angularVelocity.norm() > tol.omega)
                return false;
        }
        return true;
    };

    sweepFallen();
    // Stillness is only checked after stepping: a body at rest is not
    // necessarily in equilibrium (it may be unsupported), so velocities are
    // meaningful evidence only once the solver has acted on the state.
    for (int s = 0; s < maxSteps; ++s) {
        step(contact.dt);
        sweepFallen();
        if (allStill()) break;
    }

    for (const auto& b : bodies_) {
        if (!b.dynamic()) continue;
        Vec3 c = b.comWorld();
        bool moving = b.linearVelocity.norm() > tol.v || b.angularVelocity.norm() > tol.omega;
        bool offFootprint = std::abs(c.x) > tableHalfX || std::abs(c.y) > tableHalfY;
        if (moving || offFootprint) res.unstableIds.insert(b.id);
        else res.stableIds.insert(b.id);
    }
    return res;
}

double World::kineticEnergy() const {
    double e = 0.0;
    for (const auto& b : bodies_) {
        if (!b.dynamic()) continue;
        e += 0.5 * b.mass * b.linearVelocity.squaredNorm();
        Mat3 r = b.pose.rotation.toMatrix();
        Mat3 iw = r * b.inertiaBody * r.transposed();
        e += 0.5 * b.angularVelocity.dot(iw * b.angularVelocity);
    }
    return e;
}

} // namespace cluttergen
