#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pt {

/// Plain 3-vector used for positions, directions and points of S^2.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    if (!(n > 0.0) || !std::isfinite(n)) throw std::domain_error("cannot normalize a zero or non-finite vector");
    return a / n;
}

inline bool is_finite(const Vec3& a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

/// Rotation of `a` about unit axis `k` by `angle` (Rodrigues).
inline Vec3 rotate(const Vec3& a, const Vec3& k, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return a * c + cross(k, a) * s + k * (dot(k, a) * (1.0 - c));
}

/// A point of S^2 (or a unit direction). Construction checks |v| = 1 within 1e-9.
class UnitVec3 {
public:
    static constexpr double kTolerance = 1e-9;

    UnitVec3() : v_{1.0, 0.0, 0.0} {}
    explicit UnitVec3(const Vec3& v) : v_(v) {
        if (!is_finite(v) || std::abs(norm(v) - 1.0) > kTolerance)
            throw std::invalid_argument("UnitVec3: vector is not unit length");
    }
    static UnitVec3 normalize(const Vec3& v) { return UnitVec3(normalized(v)); }

    const Vec3& vec() const { return v_; }
    operator const Vec3&() const { return v_; }
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }

private:
    Vec3 v_;
};

inline std::string to_string(const Vec3& v) {
    return "(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " + std::to_string(v.z) + ")";
}

}  // namespace pt
