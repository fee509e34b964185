#pragma once

// The three navigation policies, all emitting unicycle commands:
//
//   combined     - opinion dynamics select the vortex rotation sense and the
//                  attention scales its strength (heading from the summed
//                  attractive + repulsive forces)
//   opinion_only - opinion deviates the heading from the goal bearing by up
//                  to beta_r, no repulsive field at all
//   apf_only     - vortex fields with a fixed counterclockwise-default sense
//                  and constant gain, no opinion and no attention
//
// A human is eligible as the opinion focus when it lies within the robot's
// field of view (cos(bearing) > fov_cos_threshold) and the robot is inside
// that human's oval; among eligible humans the nearest wins. When no focus
// exists the opinion resets to neutral and the robot steers by attraction
// alone.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "socnav/agents.hpp"
#include "socnav/fields.hpp"
#include "socnav/geometry.hpp"
#include "socnav/opinion.hpp"

namespace socnav {

enum class ControllerKind { combined, opinion_only, apf_only };

/// Source of the relative angle eta feeding the perceived opinion:
/// the human's position bearing in the robot frame (default), or the
/// human's walking direction relative to the robot's reversed heading.
enum class EtaMode { bearing, velocity };

struct ControllerConfig {
    ControllerKind kind = ControllerKind::combined;
    double omega_max = 2.0;          // rad/s
    double v_nominal = 1.0;          // m/s
    double beta_r = kPi / 4.0;       // opinion-only deviation amplitude, rad
    double fov_cos_threshold = 0.5;  // cos(bearing) must exceed this
    double goal_radius = 0.1;        // m
    EtaMode eta_mode = EtaMode::bearing;

    void validate() const {
        if (!(omega_max > 0.0)) throw std::invalid_argument("ControllerConfig.omega_max must be > 0");
        if (!(v_nominal > 0.0)) throw std::invalid_argument("ControllerConfig.v_nominal must be > 0");
        if (!(goal_radius > 0.0)) throw std::invalid_argument("ControllerConfig.goal_radius must be > 0");
        if (!(fov_cos_threshold > -1.0 && fov_cos_threshold < 1.0))
            throw std::invalid_argument("ControllerConfig.fov_cos_threshold must be in (-1, 1)");
        if (!std::isfinite(beta_r)) throw std::invalid_argument("ControllerConfig.beta_r must be finite");
    }
};

/// Everything a controller step needs besides the agent states.
struct NavParams {
    ControllerConfig controller;
    OpinionParams opinion;
    OvalSpec oval;
    FieldParams fields;
};

/// Per-step values exposed for logging and plotting.
struct StepDiagnostics {
    double z = 0.0;
    double u = 0.0;
    int gamma = -1;
    double rho = std::numeric_limits<double>::quiet_NaN();  // max over humans, at the robot
    Vec2 f_att;
    Vec2 f_rep;
    std::optional<std::size_t> focus;
};

struct ControllerOutput {
    ControlCommand cmd;
    OpinionState opinion;
    StepDiagnostics diag;
};

/// Per-human avoidance engagement. The oval's axis is aimed at the robot
/// once, when the robot first enters the oval, and stays frozen while the
/// encounter lasts; the oval itself keeps riding on the human.
struct OvalEngagement {
    bool engaged = false;
    double axis_angle = 0.0;  // frozen world angle of the local x1 axis
};

/// Current oval frame of one human: frozen axis while engaged, aimed at the
/// robot otherwise.
inline OvalFrame engagement_frame(const Vec2& human, const Vec2& robot, const OvalSpec& oval,
                                  const OvalEngagement& eng) {
    if (!eng.engaged) return build_oval_frame(human, robot, oval);
    const Vec2 dir{std::cos(eng.axis_angle), std::sin(eng.axis_angle)};
    return {human + oval.x_t * dir, eng.axis_angle};
}

/// Engage a human when the robot enters the front half of its freshly aimed
/// oval while the human is observable (inside the view cone); release when
/// the frozen frame reports the robot outside or past the center plane (the
/// pass is then resolved and attraction takes over). Once engaged, leaving
/// the view cone does not release: the avoidance finishes the maneuver. Call
/// once per tick before the policy step.
inline void update_engagements(const Pose& robot, std::span<const Pose> humans,
                               const OvalSpec& oval, std::vector<OvalEngagement>& engagements,
                               double fov_cos_threshold = 0.5) {
    engagements.resize(humans.size());
    for (std::size_t i = 0; i < humans.size(); ++i) {
        OvalEngagement& e = engagements[i];
        if (distance(robot.position, humans[i].position) == 0.0) continue;
        if (!e.engaged) {
            if (std::cos(relative_bearing(robot, humans[i].position)) <= fov_cos_threshold)
                continue;
            const OvalFrame frame = build_oval_frame(humans[i].position, robot.position, oval);
            const Vec2 local = world_to_oval(frame, robot.position);
            if (local.x > 0.0 && rho(oval, local.x, local.y) > 0.0) {
                e.engaged = true;
                e.axis_angle = frame.axis_angle;
            }
        } else {
            const OvalFrame frame = engagement_frame(humans[i].position, robot.position, oval, e);
            const Vec2 local = world_to_oval(frame, robot.position);
            if (local.x <= 0.0 || rho(oval, local.x, local.y) <= 0.0) e.engaged = false;
        }
    }
}

/// Nearest human that is inside the field of view and whose oval contains
/// the robot; ties break to the lowest index. With engagement states the
/// view-cone test is part of acquisition (update_engagements), so an engaged
/// human stays eligible through the whole maneuver even while it slides past
/// the shoulder.
inline std::optional<std::size_t> select_focus_human(const Pose& robot,
                                                     std::span<const Pose> humans,
                                                     const OvalSpec& oval,
                                                     double fov_cos_threshold,
                                                     std::span<const OvalEngagement> engagements = {}) {
    std::optional<std::size_t> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < humans.size(); ++i) {
        const double d = distance(robot.position, humans[i].position);
        if (d == 0.0) continue;  // coincident counts as a collision upstream
        const bool tracked = i < engagements.size();
        if (tracked && !engagements[i].engaged) continue;
        if (!tracked &&
            std::cos(relative_bearing(robot, humans[i].position)) <= fov_cos_threshold)
            continue;
        const OvalFrame frame = engagement_frame(humans[i].position, robot.position, oval,
                                                 tracked ? engagements[i] : OvalEngagement{});
        const Vec2 local = world_to_oval(frame, robot.position);
        if (rho(oval, local.x, local.y) <= 0.0) continue;
        if (d < best_dist) {
            best = i;
            best_dist = d;
        }
    }
    return best;
}

namespace detail {

inline double clamp_omega(double omega, double omega_max) {
    if (omega > omega_max) return omega_max;
    if (omega < -omega_max) return -omega_max;
    return omega;
}

/// rho at the robot, maximized over the humans' ovals; NaN without humans.
/// With engagement states, only engaged ovals count (a positive value then
/// means an avoidance encounter is live, which is what the solid-to-dashed
/// plot transition records); disengaged humans report their fresh-aim value
/// capped at zero so the sign stays meaningful.
inline double rho_at_robot(const Pose& robot, std::span<const Pose> humans, const OvalSpec& oval,
                           std::span<const OvalEngagement> engagements = {}) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < humans.size(); ++i) {
        if (distance(robot.position, humans[i].position) == 0.0) continue;
        const bool tracked = i < engagements.size();
        const OvalFrame frame = engagement_frame(humans[i].position, robot.position, oval,
                                                 tracked ? engagements[i] : OvalEngagement{});
        const Vec2 local = world_to_oval(frame, robot.position);
        double r = rho(oval, local.x, local.y);
        if (tracked && !engagements[i].engaged && r > 0.0) r = 0.0;
        if (std::isnan(best) || r > best) best = r;
    }
    return best;
}

/// Relative angle feeding the perceived opinion. A focus held through the
/// maneuver can drift past +-pi/2, where tan would flip sign; the angle
/// saturates at the same-side limit instead (the perceived-opinion clamp
/// takes over from there).
inline double eta_of_focus(const Pose& robot, const Pose& human, EtaMode mode) {
    double eta = mode == EtaMode::bearing
                     ? relative_bearing(robot, human.position)
                     : wrap_angle(human.heading + kPi - robot.heading);
    const double lim = kPi / 2.0 - 1e-9;
    if (eta > lim) eta = lim;
    if (eta < -lim) eta = -lim;
    return eta;
}

/// Sum of the engaged humans' vortex forces with a common rotation sense and
/// gain. Without engagement states every human counts, each under a freshly
/// aimed frame.
inline Vec2 repulsion_sum(const Pose& robot, std::span<const Pose> humans, int gamma, double u,
                          const NavParams& np, std::span<const OvalEngagement> engagements = {}) {
    Vec2 sum;
    for (std::size_t i = 0; i < humans.size(); ++i) {
        if (distance(robot.position, humans[i].position) == 0.0) continue;
        if (i < engagements.size() && !engagements[i].engaged) continue;
        const OvalFrame frame =
            engagement_frame(humans[i].position, robot.position, np.oval,
                             i < engagements.size() ? engagements[i] : OvalEngagement{});
        const Vec2 f = vortex_force(np.oval, frame, robot.position, gamma, u, np.opinion.u_hi,
                                    np.fields);
        if (!f.finite())
            throw std::runtime_error("repulsion_sum: non-finite vortex force from human " +
                                     std::to_string(i));
        sum += f;
    }
    return sum;
}

/// Heading command from the force sum: the wrapped heading error closed over
/// one step, rate-limited to omega_max. Stops the robot inside its goal
/// radius.
inline ControlCommand command_from_force(const Vec2& f, const Pose& robot, bool at_goal,
                                         const ControllerConfig& cfg, double dt) {
    if (at_goal) return {0.0, 0.0};
    if (!f.finite()) throw std::runtime_error("controller: non-finite force sum");
    double omega = 0.0;
    if (f.norm_sq() > 0.0)
        omega = clamp_omega(wrap_angle(std::atan2(f.y, f.x) - robot.heading) / dt, cfg.omega_max);
    return {omega, cfg.v_nominal};
}

}  // namespace detail

/// Full policy: focus selection, opinion/attention update, rotation sense
/// from the opinion sign, and heading from the summed forces. Engagements
/// must be advanced with update_engagements before each step.
inline ControllerOutput combined_step(const Pose& robot, std::span<const Pose> humans,
                                      const Vec2& goal, const OpinionState& opinion,
                                      std::span<const OvalEngagement> engagements,
                                      const NavParams& np, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("combined_step: dt must be > 0");
    ControllerOutput out;
    out.diag.rho = detail::rho_at_robot(robot, humans, np.oval, engagements);

    const auto focus = select_focus_human(robot, humans, np.oval,
                                          np.controller.fov_cos_threshold, engagements);
    const bool at_goal = distance(robot.position, goal) <= np.controller.goal_radius;
    const Vec2 f_att = attractive_force(robot.position, goal, np.fields.k_att,
                                        np.controller.goal_radius);
    Vec2 f_rep;
    if (!focus) {
        out.opinion = reset_neutral(np.opinion);
        out.diag.gamma = opinion_to_gamma(out.opinion.z);
    } else {
        const double d = distance(robot.position, humans[*focus].position);
        const double eta = detail::eta_of_focus(robot, humans[*focus], np.controller.eta_mode);
        const double z_hat = perceived_human_opinion(eta, np.opinion.z_hat_max);
        out.opinion = step_opinion(opinion, z_hat, d, dt, np.opinion);
        out.diag.gamma = opinion_to_gamma(out.opinion.z);
        f_rep = detail::repulsion_sum(robot, humans, out.diag.gamma, out.opinion.u, np,
                                      engagements);
    }

    out.diag.z = out.opinion.z;
    out.diag.u = out.opinion.u;
    out.diag.f_att = f_att;
    out.diag.f_rep = f_rep;
    out.diag.focus = focus;
    out.cmd = detail::command_from_force(f_att + f_rep, robot, at_goal, np.controller, dt);
    return out;
}

/// Opinion-only baseline: the commanded heading is the goal bearing deviated
/// by beta_r * tanh(z) * (u / u_hi); no repulsive field.
inline ControllerOutput opinion_only_step(const Pose& robot, std::span<const Pose> humans,
                                          const Vec2& goal, const OpinionState& opinion,
                                          std::span<const OvalEngagement> engagements,
                                          const NavParams& np, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("opinion_only_step: dt must be > 0");
    ControllerOutput out;
    out.diag.rho = detail::rho_at_robot(robot, humans, np.oval, engagements);

    const auto focus = select_focus_human(robot, humans, np.oval,
                                          np.controller.fov_cos_threshold, engagements);
    if (!focus) {
        out.opinion = reset_neutral(np.opinion);
    } else {
        const double d = distance(robot.position, humans[*focus].position);
        const double eta = detail::eta_of_focus(robot, humans[*focus], np.controller.eta_mode);
        const double z_hat = perceived_human_opinion(eta, np.opinion.z_hat_max);
        out.opinion = step_opinion(opinion, z_hat, d, dt, np.opinion);
    }
    out.diag.z = out.opinion.z;
    out.diag.u = out.opinion.u;
    out.diag.gamma = opinion_to_gamma(out.opinion.z);
    out.diag.focus = focus;
    out.diag.f_att = attractive_force(robot.position, goal, np.fields.k_att,
                                      np.controller.goal_radius);

    const bool at_goal = distance(robot.position, goal) <= np.controller.goal_radius;
    if (at_goal) {
        out.cmd = {0.0, 0.0};
        return out;
    }
    const Vec2 to_goal = goal - robot.position;
    const double theta_cmd = std::atan2(to_goal.y, to_goal.x) +
                             np.controller.beta_r * std::tanh(out.opinion.z) *
                                 (out.opinion.u / np.opinion.u_hi);
    out.cmd.omega = detail::clamp_omega(wrap_angle(theta_cmd - robot.heading) / dt,
                                        np.controller.omega_max);
    out.cmd.v = np.controller.v_nominal;
    return out;
}

/// Potential-field baseline: identical force assembly to the combined policy
/// but with a fixed rotation sense (-1) and constant repulsive gain; no
/// opinion and no attention.
inline ControllerOutput apf_only_step(const Pose& robot, std::span<const Pose> humans,
                                      const Vec2& goal,
                                      std::span<const OvalEngagement> engagements,
                                      const NavParams& np, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("apf_only_step: dt must be > 0");
    ControllerOutput out;
    out.diag.rho = detail::rho_at_robot(robot, humans, np.oval, engagements);
    out.diag.gamma = -1;

    const bool at_goal = distance(robot.position, goal) <= np.controller.goal_radius;
    const Vec2 f_att = attractive_force(robot.position, goal, np.fields.k_att,
                                        np.controller.goal_radius);
    // u = u_hi makes k_rep exactly k_rep_base
    const Vec2 f_rep = detail::repulsion_sum(robot, humans, -1, np.opinion.u_hi, np, engagements);
    out.diag.f_att = f_att;
    out.diag.f_rep = f_rep;
    out.cmd = detail::command_from_force(f_att + f_rep, robot, at_goal, np.controller, dt);
    return out;
}

}  // namespace socnav
