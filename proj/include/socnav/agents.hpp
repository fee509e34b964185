#pragma once

// Scripted human motion models and the robot's unicycle integration.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "socnav/geometry.hpp"

namespace socnav {

enum class HumanVariant {
    waypoint_follower,
    constant_velocity,
    crossing,        // straight transversal crossing; same law as constant_velocity
    erratic_script,
    robot_driven,    // pose produced by a second robot's controller
};

struct HumanModel {
    HumanVariant variant = HumanVariant::constant_velocity;
    std::vector<Vec2> waypoints;                     // for waypoint_follower
    double speed = 1.0;                              // m/s
    std::vector<std::pair<double, double>> script;   // (time s, heading rad) overrides
    bool cooperative = false;                        // reserved for avoidance offsets
    double omega_max = 3.0;                          // max turn rate, rad/s
    static constexpr double kWaypointCapture = 0.2;  // m
};

/// Mutable per-human simulation state.
struct HumanState {
    Pose pose;
    std::size_t waypoint_index = 0;
};

struct ControlCommand {
    double omega = 0.0;  // heading rate, rad/s
    double v = 0.0;      // forward speed, m/s
};

struct RobotState {
    Pose pose;
    double v = 0.0;  // commanded speed of the last step, m/s
};

/// Advance one human by dt at time t according to its motion model.
inline void human_step(const HumanModel& m, HumanState& s, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("human_step: dt must be > 0");
    switch (m.variant) {
        case HumanVariant::waypoint_follower: {
            if (m.waypoints.empty())
                throw std::invalid_argument("human_step: waypoint_follower needs waypoints");
            if (s.waypoint_index >= m.waypoints.size()) return;  // done, stand still
            const Vec2 target = m.waypoints[s.waypoint_index];
            const Vec2 d = target - s.pose.position;
            if (d.norm_sq() > 0.0) {
                const double desired = std::atan2(d.y, d.x);
                double turn = wrap_angle(desired - s.pose.heading);
                const double max_turn = m.omega_max * dt;
                if (turn > max_turn) turn = max_turn;
                if (turn < -max_turn) turn = -max_turn;
                s.pose.set_heading(s.pose.heading + turn);
            }
            s.pose.position += m.speed * dt * Vec2{std::cos(s.pose.heading), std::sin(s.pose.heading)};
            if (distance(s.pose.position, target) < HumanModel::kWaypointCapture)
                ++s.waypoint_index;
            return;
        }
        case HumanVariant::constant_velocity:
        case HumanVariant::crossing:
            s.pose.position += m.speed * dt * Vec2{std::cos(s.pose.heading), std::sin(s.pose.heading)};
            return;
        case HumanVariant::erratic_script: {
            // heading follows the most recent script entry at or before t
            for (const auto& [time, heading] : m.script)
                if (time <= t) s.pose.set_heading(heading);
            s.pose.position += m.speed * dt * Vec2{std::cos(s.pose.heading), std::sin(s.pose.heading)};
            return;
        }
        case HumanVariant::robot_driven:
            throw std::logic_error("human_step: robot_driven humans are stepped by their controller");
    }
    throw std::logic_error("human_step: unknown variant");
}

/// Unicycle Euler step: heading first, then position along the new heading.
inline RobotState robot_step(const RobotState& s, const ControlCommand& cmd, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("robot_step: dt must be > 0");
    if (!std::isfinite(cmd.omega) || !std::isfinite(cmd.v))
        throw std::invalid_argument("robot_step: non-finite command");
    RobotState out;
    out.pose.set_heading(s.pose.heading + cmd.omega * dt);
    out.pose.position = s.pose.position +
                        cmd.v * dt * Vec2{std::cos(out.pose.heading), std::sin(out.pose.heading)};
    out.v = cmd.v;
    return out;
}

}  // namespace socnav
