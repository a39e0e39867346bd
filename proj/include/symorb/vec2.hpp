#pragma once

#include <cmath>
#include <ostream>

namespace symorb {

/// Plane vector used for positions, velocities and accelerations.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    constexpr Vec2& operator*=(double s) {
        x *= s;
        y *= s;
        return *this;
    }

    [[nodiscard]] double norm() const { return std::hypot(x, y); }
    [[nodiscard]] constexpr double squared_norm() const { return x * x + y * y; }

    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline std::ostream& operator<<(std::ostream& os, const Vec2& v) {
    return os << '(' << v.x << ", " << v.y << ')';
}

/// Mirror maps of the plane. `XAxis` is the mirror in the x-axis, (x, y) -> (x, -y);
/// `YAxis` is the mirror in the y-axis, (x, y) -> (-x, y).
enum class Reflection { XAxis, YAxis };

constexpr Vec2 reflect(Reflection r, const Vec2& p) {
    return r == Reflection::XAxis ? Vec2{p.x, -p.y} : Vec2{-p.x, p.y};
}

/// Phase-space point of the second-order system.
struct State {
    double t = 0.0;
    Vec2 position;
    Vec2 velocity;
};

inline State reflect(Reflection r, const State& s) {
    return {s.t, reflect(r, s.position), reflect(r, s.velocity)};
}

}  // namespace symorb
