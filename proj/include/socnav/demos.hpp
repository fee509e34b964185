#pragma once

// Built-in demonstration scenarios for the qualitative passing cases: the
// angled encounters that commit the opinion to each side, the dead-ahead
// deadlock breaker, the three-method comparison scene, and the dual-robot
// mutual pass.

#include <stdexcept>
#include <string>
#include <vector>

#include "socnav/simulation.hpp"

namespace socnav {

inline ScenarioSpec demo_scenario(const std::string& name) {
    ScenarioSpec sc;
    sc.robot.start = Pose{{-4.0, 0.0}, 0.0};
    sc.robot.goal = {4.0, 0.0};

    if (name == "fig3a") {
        // human ahead on the robot's left, walking opposite: the robot reads
        // a rightward tendency, z settles positive, gamma stays -1
        HumanSpec h;
        h.start = Pose{{4.0, 0.8}, kPi};
        h.model.variant = HumanVariant::crossing;
        h.model.speed = 1.0;
        h.goal = Vec2{-4.0, 0.8};
        sc.humans = {h};
        return sc;
    }
    if (name == "fig3b") {
        // mirror image of fig3a: z settles negative, gamma stays +1
        HumanSpec h;
        h.start = Pose{{4.0, -0.8}, kPi};
        h.model.variant = HumanVariant::crossing;
        h.model.speed = 1.0;
        h.goal = Vec2{-4.0, -0.8};
        sc.humans = {h};
        return sc;
    }
    if (name == "headon") {
        // dead-ahead non-cooperative walker; the default CCW choice breaks
        // the deadlock
        HumanSpec h;
        h.start = Pose{{4.0, 0.0}, kPi};
        h.model.variant = HumanVariant::constant_velocity;
        h.model.speed = 1.0;
        h.goal = Vec2{-4.0, 0.0};
        sc.humans = {h};
        return sc;
    }
    if (name == "fig4") {
        // comparison scene: the goal sits to the robot's right and the human
        // approaches from that side, so the fixed-sense baseline detours the
        // long way around while the opinion picks the short side
        sc.robot.start = Pose{{-4.0, 0.0}, std::atan2(-1.8, 7.5)};
        sc.robot.goal = {3.5, -1.8};
        HumanSpec h;
        h.start = Pose{{2.5, -0.9}, kPi + 0.15};
        h.model.variant = HumanVariant::crossing;
        h.model.speed = 0.8;
        sc.humans = {h};
        return sc;
    }
    if (name == "fig5") {
        // two robots guiding each other head-on; coupled opinions keep the
        // rotation senses compatible
        sc.dual_robot = true;
        sc.robot2 = RobotSpec{Pose{{4.0, 0.0}, kPi}, {-4.0, 0.0}};
        return sc;
    }
    throw std::invalid_argument("demo_scenario: unknown demo \"" + name +
                                "\" (expected fig3a, fig3b, fig4, fig5 or headon)");
}

inline std::vector<std::string> demo_names() {
    return {"fig3a", "fig3b", "fig4", "fig5", "headon"};
}

}  // namespace socnav
