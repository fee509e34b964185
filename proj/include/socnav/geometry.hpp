#pragma once

// Planar vectors, poses, angle arithmetic, and the world <-> oval-frame
// transforms used throughout the simulator. All angles are radians and
// are kept wrapped to (-pi, pi] at every write.

#include <cmath>
#include <stdexcept>
#include <string>

namespace socnav {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
    double x{0.0};  // meters
    double y{0.0};  // meters

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm_sq() const { return x * x + y * y; }

    /// Unit vector, or {0,0} when shorter than eps.
    Vec2 normalized(double eps = 1e-12) const {
        const double n = norm();
        if (n <= eps) return {0.0, 0.0};
        return {x / n, y / n};
    }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Wrap an angle to (-pi, pi]. Idempotent on already-wrapped input.
inline double wrap_angle(double a) {
    if (!std::isfinite(a)) throw std::invalid_argument("wrap_angle: non-finite angle");
    double w = std::remainder(a, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

struct Pose {
    Vec2 position;
    double heading{0.0};  // radians in (-pi, pi]

    Pose() = default;
    Pose(const Vec2& p, double h) : position(p), heading(wrap_angle(h)) {}

    void set_heading(double h) { heading = wrap_angle(h); }
};

/// Local frame of an oval limit cycle: origin at `center`, local x1 axis at
/// world angle `axis_angle`.
struct OvalFrame {
    Vec2 center;
    double axis_angle{0.0};  // radians in (-pi, pi]
};

/// Bearing of `target` in the observer's body frame. Positive means the
/// target lies to the observer's left.
inline double relative_bearing(const Pose& observer, const Vec2& target) {
    const Vec2 d = target - observer.position;
    if (d.norm_sq() == 0.0)
        throw std::invalid_argument("relative_bearing: observer and target coincide");
    return wrap_angle(std::atan2(d.y, d.x) - observer.heading);
}

/// World point -> oval-local coordinates (x1, x2).
inline Vec2 world_to_oval(const OvalFrame& frame, const Vec2& p) {
    const double c = std::cos(frame.axis_angle);
    const double s = std::sin(frame.axis_angle);
    const Vec2 d = p - frame.center;
    return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

/// Oval-local point -> world point.
inline Vec2 oval_to_world(const OvalFrame& frame, const Vec2& local) {
    const double c = std::cos(frame.axis_angle);
    const double s = std::sin(frame.axis_angle);
    return {frame.center.x + c * local.x - s * local.y,
            frame.center.y + s * local.x + c * local.y};
}

/// Oval-local vector -> world vector (rotation only, vectors do not translate).
inline Vec2 oval_to_world_vec(const OvalFrame& frame, const Vec2& v) {
    const double c = std::cos(frame.axis_angle);
    const double s = std::sin(frame.axis_angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace socnav
