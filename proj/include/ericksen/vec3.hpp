#pragma once

#include <array>
#include <cmath>

namespace ericksen {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double a) { x *= a; y *= a; z *= a; return *this; }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

/// Row-major 3x3 matrix. For a director Jacobian, m(i, j) = d n_i / d x_j.
struct Mat3 {
    std::array<double, 9> a{};

    constexpr double& operator()(int i, int j) { return a[3 * i + j]; }
    constexpr double operator()(int i, int j) const { return a[3 * i + j]; }

    constexpr double trace() const { return a[0] + a[4] + a[8]; }
    constexpr Vec3 column(int j) const { return {a[j], a[3 + j], a[6 + j]}; }
    constexpr void set_column(int j, const Vec3& v) { a[j] = v.x; a[3 + j] = v.y; a[6 + j] = v.z; }
};

constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

/// m^T v
constexpr Vec3 transpose_times(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(1, 0) * v.y + m(2, 0) * v.z,
            m(0, 1) * v.x + m(1, 1) * v.y + m(2, 1) * v.z,
            m(0, 2) * v.x + m(1, 2) * v.y + m(2, 2) * v.z};
}

}  // namespace ericksen
