#pragma once

#include <cmath>

namespace hybridspin {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }
    double& operator[](int k) { return k == 0 ? x : (k == 1 ? y : z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

// symmetric 3x3 matrix, row-major upper storage not needed at this scale
struct Mat3 {
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    Vec3 apply(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

// rotation by angle about a unit axis (Rodrigues)
inline Mat3 rotation_about(const Vec3& axis, double angle) {
    const Vec3 n = normalized(axis);
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Mat3 r;
    r.m[0][0] = c + n.x * n.x * t;
    r.m[0][1] = n.x * n.y * t - n.z * s;
    r.m[0][2] = n.x * n.z * t + n.y * s;
    r.m[1][0] = n.y * n.x * t + n.z * s;
    r.m[1][1] = c + n.y * n.y * t;
    r.m[1][2] = n.y * n.z * t - n.x * s;
    r.m[2][0] = n.z * n.x * t - n.y * s;
    r.m[2][1] = n.z * n.y * t + n.x * s;
    r.m[2][2] = c + n.z * n.z * t;
    return r;
}

}  // namespace hybridspin
