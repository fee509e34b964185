#pragma once

// Goal attraction and the oval limit-cycle vortex field.
//
// The oval around a human is the zero set of
//
//   rho(x1, x2) = 1 - (x1/b1)^2 - (x2/b2)^2 e^{nu x1}
//
// in its local frame; rho > 0 inside, rho < 0 outside. For nu > 0 the curve
// is wider on the x1 < 0 side, which is where the human is placed. The
// repulsive force circulates along the curve (feedforward term) while a
// feedback term pushes the state toward rho = 0 from either side. The
// circulation sense gamma = +1 turns counterclockwise, gamma = -1 clockwise.

#include <cmath>
#include <stdexcept>

#include "socnav/geometry.hpp"

namespace socnav {

struct OvalSpec {
    double b1 = 2.5;      // semi-axis along local x1, m
    double b2 = 5.0;      // semi-axis along local x2, m
    double nu = 0.5;      // deformation, 1/m
    double x_t = 1.25;    // center translation along local x1, m
    double alpha1 = 0.5;  // feedback gain on x1
    double alpha2 = 5.0;  // feedback gain on x2

    void validate() const {
        if (!(b1 > 0.0)) throw std::invalid_argument("OvalSpec.b1 must be > 0");
        if (!(b2 > 0.0)) throw std::invalid_argument("OvalSpec.b2 must be > 0");
        if (!std::isfinite(nu)) throw std::invalid_argument("OvalSpec.nu must be finite");
        if (!std::isfinite(x_t)) throw std::invalid_argument("OvalSpec.x_t must be finite");
        if (!(alpha1 > 0.0)) throw std::invalid_argument("OvalSpec.alpha1 must be > 0");
        if (!(alpha2 > 0.0)) throw std::invalid_argument("OvalSpec.alpha2 must be > 0");
    }
};

struct FieldParams {
    double k_att = 1.0;       // attractive gain
    double k_rep_base = 1.0;  // repulsive gain at full attention
    double f_max = 5.0;       // repulsive force magnitude cap

    void validate() const {
        if (!(k_att > 0.0)) throw std::invalid_argument("FieldParams.k_att must be > 0");
        if (!(k_rep_base >= 0.0)) throw std::invalid_argument("FieldParams.k_rep_base must be >= 0");
        if (!(f_max > 0.0)) throw std::invalid_argument("FieldParams.f_max must be > 0");
    }
};

/// Implicit oval value: positive strictly inside the curve, zero on it,
/// negative outside.
inline double rho(const OvalSpec& o, double x1, double x2) {
    const double a = x1 / o.b1;
    const double b = x2 / o.b2;
    return 1.0 - a * a - b * b * std::exp(o.nu * x1);
}

/// Tangential (circulating) component of the vortex, evaluated at the
/// translated coordinate x1_bar.
inline Vec2 feedforward(const OvalSpec& o, double x1_bar, double x2) {
    const double e_pos = std::exp(0.5 * o.nu * x1_bar);
    const double e_neg = std::exp(-0.5 * o.nu * x1_bar);
    return {-o.b1 * (x2 / o.b2) * e_pos,
            o.b2 * (x1_bar / o.b1) * e_neg + x2 * x2 * e_pos * o.nu / (2.0 * o.b1 * o.b2)};
}

/// Radial feedback component: repulsive inside the oval (rho > 0),
/// attractive outside, vanishing on the curve.
inline Vec2 feedback(const OvalSpec& o, double x1, double x2) {
    const double r = rho(o, x1, x2);
    return {(x1 - o.x_t) * r, x2 * r};
}

/// Constant-magnitude attraction toward the goal; zero inside the goal
/// radius, so the force stays bounded at any distance.
inline Vec2 attractive_force(const Vec2& robot, const Vec2& goal, double k_att,
                             double goal_radius = 0.0) {
    const Vec2 d = goal - robot;
    if (d.norm() <= goal_radius) return {0.0, 0.0};
    return k_att * d.normalized();
}

/// Frame of the oval around a human: local x1 axis aimed at the robot, center
/// pushed x_t toward the robot so the human sits at local (-x_t, 0), in the
/// wide lobe of the oval.
inline OvalFrame build_oval_frame(const Vec2& human, const Vec2& robot, const OvalSpec& o) {
    const Vec2 d = robot - human;
    if (d.norm_sq() == 0.0)
        throw std::invalid_argument("build_oval_frame: human and robot coincide");
    const double axis = std::atan2(d.y, d.x);
    return {human + o.x_t * d.normalized(), wrap_angle(axis)};
}

/// World-frame repulsive force of one human's vortex on the robot. Zero
/// outside the oval; inside, the circulation (sense gamma) plus the gained
/// feedback, scaled by the attention-proportional k_rep and capped at f_max.
inline Vec2 vortex_force(const OvalSpec& o, const OvalFrame& frame, const Vec2& robot_world,
                         int gamma, double u, double u_hi, const FieldParams& fp) {
    const Vec2 local = world_to_oval(frame, robot_world);
    if (rho(o, local.x, local.y) < 0.0) return {0.0, 0.0};

    const Vec2 ff = feedforward(o, local.x - o.x_t, local.y);
    const Vec2 fb = feedback(o, local.x, local.y);
    Vec2 f_local{gamma * ff.x + o.alpha1 * fb.x, gamma * ff.y + o.alpha2 * fb.y};

    const double k_rep = fp.k_rep_base * (u / u_hi);
    Vec2 f = oval_to_world_vec(frame, k_rep * f_local);
    const double mag = f.norm();
    if (mag > fp.f_max) f = f * (fp.f_max / mag);
    return f;
}

/// Raw state-evolution field of the oval limit cycle, with the feedback
/// active on both sides of the curve. Evaluated in axis-normalized
/// coordinates (x1/b1, x2/b2), where the circulation is tangent to the rho
/// level sets; velocities are returned in m/s. Used for limit-cycle property
/// checks independently of the inside-only force gate.
inline Vec2 limit_cycle_flow(const OvalSpec& o, double x1, double x2, int gamma) {
    const double n1 = x1 / o.b1;
    const double n2 = x2 / o.b2;
    const double nu_n = o.nu * o.b1;   // deformation seen by normalized coords
    const double xt_n = o.x_t / o.b1;
    const double n1b = n1 - xt_n;
    const double r = rho(o, x1, x2);
    const double e_pos = std::exp(0.5 * nu_n * n1b);
    const double e_neg = std::exp(-0.5 * nu_n * n1b);
    const double d1 = -gamma * n2 * e_pos + o.alpha1 * (n1 - xt_n) * r;
    const double d2 = gamma * (n1b * e_neg + n2 * n2 * e_pos * nu_n / 2.0) + o.alpha2 * n2 * r;
    return {o.b1 * d1, o.b2 * d2};
}

}  // namespace socnav
