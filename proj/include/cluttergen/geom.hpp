#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cluttergen {

constexpr double kPi = 3.14159265358979323846;

inline double degToRad(double deg) { return deg * kPi / 180.0; }
inline double radToDeg(double rad) { return rad * 180.0 / kPi; }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // z-component of the 3D cross product of the embedded vectors
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double squaredNorm() const { return x * x + y * y; }
    double norm() const { return std::sqrt(squaredNorm()); }
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    static Vec3 zero() { return {0.0, 0.0, 0.0}; }
    static Vec3 unitX() { return {1.0, 0.0, 0.0}; }
    static Vec3 unitY() { return {0.0, 1.0, 0.0}; }
    static Vec3 unitZ() { return {0.0, 0.0, 1.0}; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double squaredNorm() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(squaredNorm()); }

    Vec3 normalized() const {
        double n = norm();
        if (n <= 0.0) throw std::invalid_argument("cannot normalize zero-length vector");
        return {x / n, y / n, z / n};
    }

    Vec3 cwiseMin(const Vec3& o) const {
        return {std::min(x, o.x), std::min(y, o.y), std::min(z, o.z)};
    }
    Vec3 cwiseMax(const Vec3& o) const {
        return {std::max(x, o.x), std::max(y, o.y), std::max(z, o.z)};
    }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Angle between two vectors in [0, pi]; robust near 0 and pi.
inline double angleBetween(const Vec3& a, const Vec3& b) {
    double num = a.cross(b).norm();
    double den = a.dot(b);
    return std::atan2(num, den);
}

// Column-major semantics are avoided entirely: m[r][c] is row r, column c.
struct Mat3 {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static Mat3 identity() { return {}; }
    static Mat3 zeroes() {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = 0.0;
        return r;
    }
    static Mat3 diagonal(double a, double b, double c) {
        Mat3 r = zeroes();
        r.m[0][0] = a; r.m[1][1] = b; r.m[2][2] = c;
        return r;
    }
    static Mat3 fromColumns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        Mat3 r;
        r.m[0][0] = c0.x; r.m[0][1] = c1.x; r.m[0][2] = c2.x;
        r.m[1][0] = c0.y; r.m[1][1] = c1.y; r.m[1][2] = c2.y;
        r.m[2][0] = c0.z; r.m[2][1] = c1.z; r.m[2][2] = c2.z;
        return r;
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r = zeroes();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
        return r;
    }
    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
        return r;
    }
    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }
    double determinant() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }
    Mat3 inverse() const {
        double det = determinant();
        if (std::abs(det) < 1e-300) throw std::runtime_error("singular 3x3 matrix");
        Mat3 r;
        r.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
        r.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
        r.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
        r.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
        r.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
        r.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
        r.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
        r.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
        r.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
        return r;
    }
};

// Unit quaternion (w, x, y, z). Kept normalized by construction helpers;
// normalize() is available after long integration chains.
struct Quat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Quat() = default;
    Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    static Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }

    static Quat fromAxisAngle(const Vec3& axis, double angle) {
        Vec3 a = axis.normalized();
        double h = 0.5 * angle;
        double s = std::sin(h);
        return {std::cos(h), a.x * s, a.y * s, a.z * s};
    }

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quat normalized() const {
        double n = norm();
        if (n <= 0.0) throw std::runtime_error("cannot normalize zero quaternion");
        return {w / n, x / n, y / n, z / n};
    }

    Quat conjugate() const { return {w, -x, -y, -z}; }

    Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    Vec3 rotate(const Vec3& v) const {
        // q v q* expanded; avoids building the matrix for single points.
        Vec3 u{x, y, z};
        Vec3 t = u.cross(v) * 2.0;
        return v + t * w + u.cross(t);
    }

    Mat3 toMatrix() const {
        Mat3 r;
        double xx = x * x, yy = y * y, zz = z * z;
        double xy = x * y, xz = x * z, yz = y * z;
        double wx = w * x, wy = w * y, wz = w * z;
        r.m[0][0] = 1 - 2 * (yy + zz); r.m[0][1] = 2 * (xy - wz); r.m[0][2] = 2 * (xz + wy);
        r.m[1][0] = 2 * (xy + wz); r.m[1][1] = 1 - 2 * (xx + zz); r.m[1][2] = 2 * (yz - wx);
        r.m[2][0] = 2 * (xz - wy); r.m[2][1] = 2 * (yz + wx); r.m[2][2] = 1 - 2 * (xx + yy);
        return r;
    }

    // Rotation angle of this quaternion in [0, pi].
    double angle() const {
        double c = std::min(1.0, std::abs(w) / std::max(norm(), 1e-300));
        return 2.0 * std::acos(c);
    }

    // From a proper rotation matrix (Shepperd's branch selection).
    static Quat fromMatrix(const Mat3& r) {
        const auto& m = r.m;
        double tr = m[0][0] + m[1][1] + m[2][2];
        Quat q;
        if (tr > 0.0) {
            double s = std::sqrt(tr + 1.0) * 2.0;
            q = {0.25 * s, (m[2][1] - m[1][2]) / s, (m[0][2] - m[2][0]) / s,
                 (m[1][0] - m[0][1]) / s};
        } else if (m[0][0] > m[1][1] && m[0][0] > m[2][2]) {
            double s = std::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]) * 2.0;
            q = {(m[2][1] - m[1][2]) / s, 0.25 * s, (m[0][1] + m[1][0]) / s,
                 (m[0][2] + m[2][0]) / s};
        } else if (m[1][1] > m[2][2]) {
            double s = std::sqrt(1.0 + m[1][1] - m[0][0] - m[2][2]) * 2.0;
            q = {(m[0][2] - m[2][0]) / s, (m[0][1] + m[1][0]) / s, 0.25 * s,
                 (m[1][2] + m[2][1]) / s};
        } else {
            double s = std::sqrt(1.0 + m[2][2] - m[0][0] - m[1][1]) * 2.0;
            q = {(m[1][0] - m[0][1]) / s, (m[0][2] + m[2][0]) / s, (m[1][2] + m[2][1]) / s,
                 0.25 * s};
        }
        return q.normalized();
    }
};

// Rigid transform: p_world = rotation * p_local + translation.
struct Pose {
    Quat rotation;
    Vec3 translation;

    Pose() = default;
    Pose(const Quat& q, const Vec3& t) : rotation(q), translation(t) {}

    static Pose identity() { return {}; }

    Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }
    Vec3 rotate(const Vec3& v) const { return rotation.rotate(v); }

    Pose compose(const Pose& o) const {
        // this * o: apply o first, then this.
        return {(rotation * o.rotation).normalized(), rotation.rotate(o.translation) + translation};
    }
    Pose operator*(const Pose& o) const { return compose(o); }

    Pose inverse() const {
        Quat ri = rotation.conjugate();
        return {ri, ri.rotate(-translation)};
    }

    Vec3 applyInverse(const Vec3& p) const {
        return rotation.conjugate().rotate(p - translation);
    }
};

struct PoseDelta {
    double translation = 0.0;   // meters
    double rotationAngle = 0.0; // radians, in [0, pi]
};

inline PoseDelta poseDelta(const Pose& a, const Pose& b) {
    PoseDelta d;
    d.translation = (a.translation - b.translation).norm();
    Quat rel = a.rotation.conjugate() * b.rotation;
    d.rotationAngle = rel.angle();
    return d;
}

} // namespace cluttergen
