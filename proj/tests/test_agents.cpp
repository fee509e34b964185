#include <doctest.h>

#include <cmath>

#include "socnav/agents.hpp"

using namespace socnav;

TEST_CASE("constant-velocity human advances along its heading") {
    HumanModel m;
    m.variant = HumanVariant::constant_velocity;
    m.speed = 1.0;
    HumanState s{Pose{{0, 0}, 0.0}, 0};
    human_step(m, s, 0.0, 0.1);
    CHECK(s.pose.position.x == doctest::Approx(0.1));
    CHECK(s.pose.position.y == doctest::Approx(0.0));
}

TEST_CASE("zero-speed human stays put") {
    HumanModel m;
    m.variant = HumanVariant::constant_velocity;
    m.speed = 0.0;
    HumanState s{Pose{{2, 3}, 1.0}, 0};
    human_step(m, s, 0.0, 0.1);
    CHECK(s.pose.position.x == 2.0);
    CHECK(s.pose.position.y == 3.0);
}

TEST_CASE("waypoint follower advances the waypoint when captured") {
    HumanModel m;
    m.variant = HumanVariant::waypoint_follower;
    m.speed = 1.0;
    m.waypoints = {{0.25, 0.0}, {0.25, 5.0}};
    HumanState s{Pose{{0, 0}, 0.0}, 0};
    human_step(m, s, 0.0, 0.1);
    CHECK(s.waypoint_index == 1);  // within 0.2 m of the first waypoint
    // then it turns toward the second, limited by the turn rate
    const double before = s.pose.heading;
    human_step(m, s, 0.1, 0.1);
    CHECK(s.pose.heading - before == doctest::Approx(m.omega_max * 0.1));
}

TEST_CASE("waypoint follower reaches every waypoint in bounded time") {
    HumanModel m;
    m.variant = HumanVariant::waypoint_follower;
    m.speed = 1.2;
    m.waypoints = {{3, 0}, {3, 3}, {-1, 3}};
    HumanState s{Pose{{0, 0}, kPi}, 0};  // starts facing away
    double t = 0.0;
    while (s.waypoint_index < m.waypoints.size() && t < 30.0) {
        human_step(m, s, t, 0.01);
        t += 0.01;
    }
    CHECK(s.waypoint_index == m.waypoints.size());
    // afterwards it stands still
    const Vec2 rest = s.pose.position;
    human_step(m, s, t, 0.01);
    CHECK(s.pose.position.x == rest.x);
    CHECK(s.pose.position.y == rest.y);
}

TEST_CASE("erratic script applies the most recent heading override") {
    HumanModel m;
    m.variant = HumanVariant::erratic_script;
    m.speed = 1.0;
    m.script = {{0.5, kPi / 2.0}, {1.0, kPi}};
    HumanState s{Pose{{0, 0}, 0.0}, 0};
    human_step(m, s, 0.0, 0.01);
    CHECK(s.pose.heading == 0.0);  // no entry active yet
    human_step(m, s, 0.6, 0.01);
    CHECK(s.pose.heading == doctest::Approx(kPi / 2.0));
    human_step(m, s, 1.4, 0.01);
    CHECK(s.pose.heading == doctest::Approx(kPi));
}

TEST_CASE("robot_driven humans cannot be stepped directly") {
    HumanModel m;
    m.variant = HumanVariant::robot_driven;
    HumanState s{Pose{{0, 0}, 0.0}, 0};
    CHECK_THROWS_AS(human_step(m, s, 0.0, 0.1), std::logic_error);
}

TEST_CASE("waypoint follower without waypoints is rejected") {
    HumanModel m;
    m.variant = HumanVariant::waypoint_follower;
    HumanState s{Pose{{0, 0}, 0.0}, 0};
    CHECK_THROWS_AS(human_step(m, s, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("robot_step: heading first, then position along the new heading") {
    RobotState s{Pose{{0, 0}, 0.0}, 0.0};
    const RobotState out = robot_step(s, {0.0, 1.0}, 0.1);
    CHECK(out.pose.position.x == doctest::Approx(0.1));
    CHECK(out.pose.position.y == doctest::Approx(0.0));

    // pure rotation
    const RobotState spin = robot_step(s, {1.0, 0.0}, 0.1);
    CHECK(spin.pose.position.x == 0.0);
    CHECK(spin.pose.heading == doctest::Approx(0.1));

    // the displacement follows the post-update heading
    const RobotState turn = robot_step(s, {kPi / 2.0 / 0.1, 1.0}, 0.1);
    CHECK(turn.pose.heading == doctest::Approx(kPi / 2.0));
    CHECK(turn.pose.position.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(turn.pose.position.y == doctest::Approx(0.1));
}

TEST_CASE("robot_step wraps the heading without aliasing") {
    RobotState s{Pose{{0, 0}, 0.0}, 0.0};
    const RobotState out = robot_step(s, {kPi / 0.1, 0.0}, 0.1);
    CHECK(out.pose.heading == doctest::Approx(kPi));

    // per-step displacement magnitude is exactly v*dt
    RobotState r{Pose{{1, 2}, 0.7}, 0.0};
    const RobotState moved = robot_step(r, {0.3, 1.4}, 0.05);
    CHECK(distance(moved.pose.position, r.pose.position) == doctest::Approx(1.4 * 0.05));
}
