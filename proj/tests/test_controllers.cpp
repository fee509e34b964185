#include <doctest.h>

#include <cmath>
#include <vector>

#include "socnav/controllers.hpp"
#include "socnav/prng.hpp"

using namespace socnav;

namespace {

NavParams default_params() {
    return NavParams{ControllerConfig{}, OpinionParams{}, OvalSpec{}, FieldParams{}};
}

}  // namespace

TEST_CASE("select_focus_human: gates and nearest-wins") {
    const NavParams np = default_params();
    const Pose robot{{0, 0}, 0.0};

    CHECK(!select_focus_human(robot, {}, np.oval, 0.5));

    // far ahead: outside its own oval
    std::vector<Pose> far = {Pose{{10, 0}, kPi}};
    CHECK(!select_focus_human(robot, far, np.oval, 0.5));

    // behind: outside the field of view even though the oval would contain us
    std::vector<Pose> behind = {Pose{{-1, 0}, 0.0}};
    CHECK(!select_focus_human(robot, behind, np.oval, 0.5));

    // two eligible humans: nearest wins
    std::vector<Pose> two = {Pose{{2, 0}, kPi}, Pose{{1, 0}, kPi}};
    auto focus = select_focus_human(robot, two, np.oval, 0.5);
    REQUIRE(focus.has_value());
    CHECK(*focus == 1);

    // permutation changes only the index, not the chosen human
    std::vector<Pose> swapped = {two[1], two[0]};
    auto focus2 = select_focus_human(robot, swapped, np.oval, 0.5);
    REQUIRE(focus2.has_value());
    CHECK(*focus2 == 0);

    // exact tie breaks to the lowest index
    std::vector<Pose> tie = {Pose{{1, 0}, kPi}, Pose{{1, 0}, kPi}};
    auto focus3 = select_focus_human(robot, tie, np.oval, 0.5);
    REQUIRE(focus3.has_value());
    CHECK(*focus3 == 0);
}

TEST_CASE("combined: no humans means pure aligned attraction") {
    const NavParams np = default_params();
    const Pose robot{{0, 0}, 0.0};
    const auto out = combined_step(robot, {}, {2, 0}, OpinionState{}, {}, np, 0.01);
    CHECK(out.cmd.omega == 0.0);
    CHECK(out.cmd.v == np.controller.v_nominal);
    CHECK(out.opinion.z == 0.0);
    CHECK(std::isnan(out.diag.rho));
}

TEST_CASE("combined: dead-ahead human keeps the default rotation sense") {
    const NavParams np = default_params();
    const Pose robot{{0, 0}, 0.0};
    std::vector<Pose> humans = {Pose{{3.0, 0.0}, kPi}};
    std::vector<OvalEngagement> eng;
    update_engagements(robot, humans, np.oval, eng);
    REQUIRE(eng[0].engaged);
    const auto out = combined_step(robot, humans, {8, 0}, OpinionState{}, eng, np, 0.01);
    CHECK(out.diag.gamma == -1);
    CHECK(out.diag.focus.has_value());
}

TEST_CASE("combined: human behind resets the opinion and matches the empty-scene command") {
    NavParams np = default_params();
    const Pose robot{{0, 0}, 0.3};
    const Vec2 goal{5, 1};
    std::vector<Pose> humans = {Pose{{-1, 0}, 0.0}};  // 1 m behind
    std::vector<OvalEngagement> eng;
    update_engagements(robot, humans, np.oval, eng);
    const auto with_h = combined_step(robot, humans, goal, OpinionState{0.8, 1.2}, eng, np, 0.01);
    const auto without = combined_step(robot, {}, goal, OpinionState{}, {}, np, 0.01);
    CHECK(with_h.opinion.z == 0.0);
    CHECK(with_h.opinion.u == np.opinion.u_lo);
    CHECK(with_h.cmd.omega == without.cmd.omega);
    CHECK(with_h.cmd.v == without.cmd.v);
}

TEST_CASE("combined with no focus degenerates to apf with zero repulsive gain") {
    NavParams np = default_params();
    NavParams np0 = np;
    np0.fields.k_rep_base = 0.0;
    const Pose robot{{0, 0}, -0.2};
    const Vec2 goal{6, 2};
    std::vector<Pose> humans = {Pose{{0, 9}, 0.0}};  // far outside every gate
    std::vector<OvalEngagement> eng;
    update_engagements(robot, humans, np.oval, eng);
    const auto a = combined_step(robot, humans, goal, OpinionState{}, eng, np, 0.01);
    const auto b = apf_only_step(robot, humans, goal, eng, np0, 0.01);
    CHECK(a.cmd.omega == b.cmd.omega);
    CHECK(a.cmd.v == b.cmd.v);
}

TEST_CASE("opinion-only: neutral heads straight, saturated deviates by beta_r") {
    NavParams np = default_params();
    const Pose robot{{0, 0}, 0.0};
    const Vec2 goal{10, 0};

    const auto straight = opinion_only_step(robot, {}, goal, OpinionState{}, {}, np, 0.01);
    CHECK(straight.cmd.omega == 0.0);

    // saturated positive opinion with full attention: deviation +beta_r (left)
    std::vector<Pose> humans = {Pose{{2.0, 0.0}, kPi}};
    std::vector<OvalEngagement> eng;
    update_engagements(robot, humans, np.oval, eng);
    REQUIRE(eng[0].engaged);
    const auto dev = opinion_only_step(robot, humans, goal, OpinionState{5.0, np.opinion.u_hi},
                                       eng, np, 0.01);
    // the commanded rate saturates toward +omega_max for a +45 deg target
    CHECK(dev.cmd.omega == doctest::Approx(np.controller.omega_max));

    // mirrored opinion gives the mirrored command exactly
    const auto neg = opinion_only_step(robot, humans, goal, OpinionState{-5.0, np.opinion.u_hi},
                                       eng, np, 0.01);
    CHECK(neg.cmd.omega == -dev.cmd.omega);
}

TEST_CASE("apf: matches combined on empty scenes and never rotates clockwise-positive") {
    const NavParams np = default_params();
    const Pose robot{{0, 0}, 0.1};
    const Vec2 goal{4, -2};
    const auto a = apf_only_step(robot, {}, goal, {}, np, 0.01);
    const auto c = combined_step(robot, {}, goal, OpinionState{}, {}, np, 0.01);
    CHECK(a.cmd.omega == c.cmd.omega);
    CHECK(a.cmd.v == c.cmd.v);
    CHECK(a.diag.gamma == -1);

    SplitMix64 prng(77);
    for (int i = 0; i < 50; ++i) {
        std::vector<Pose> humans = {
            Pose{{prng.uniform(-4, 4), prng.uniform(-4, 4)}, wrap_angle(prng.uniform(-3, 3))}};
        if (distance(humans[0].position, robot.position) < 0.05) continue;
        std::vector<OvalEngagement> eng;
        update_engagements(robot, humans, np.oval, eng);
        const auto out = apf_only_step(robot, humans, goal, eng, np, 0.01);
        CHECK(out.diag.gamma == -1);
    }
}

TEST_CASE("commands stay within bounds for all controllers") {
    const NavParams np = default_params();
    SplitMix64 prng(99);
    OpinionState op{};
    std::vector<OvalEngagement> eng;
    for (int i = 0; i < 300; ++i) {
        const Pose robot{{prng.uniform(-5, 5), prng.uniform(-5, 5)},
                         wrap_angle(prng.uniform(-3, 3))};
        std::vector<Pose> humans = {
            Pose{{prng.uniform(-5, 5), prng.uniform(-5, 5)}, wrap_angle(prng.uniform(-3, 3))}};
        if (distance(humans[0].position, robot.position) < 0.05) continue;
        const Vec2 goal{prng.uniform(-6, 6), prng.uniform(-6, 6)};
        update_engagements(robot, humans, np.oval, eng);

        const auto c = combined_step(robot, humans, goal, op, eng, np, 0.01);
        op = c.opinion;
        for (const auto& out : {c, apf_only_step(robot, humans, goal, eng, np, 0.01)}) {
            CHECK(std::fabs(out.cmd.omega) <= np.controller.omega_max + 1e-12);
            CHECK((out.cmd.v == 0.0 || out.cmd.v == np.controller.v_nominal));
        }
    }
}

TEST_CASE("velocity eta mode reads the walking direction, not the position") {
    NavParams np = default_params();
    np.controller.eta_mode = EtaMode::velocity;
    const Pose robot{{0, 0}, 0.0};
    const Vec2 goal{8, 0};
    std::vector<OvalEngagement> eng;

    // walking straight at the robot: zero perceived opinion, z stays exactly 0
    std::vector<Pose> head_on = {Pose{{3.0, 0.6}, kPi}};
    update_engagements(robot, head_on, np.oval, eng);
    OpinionState op{};
    for (int i = 0; i < 50; ++i)
        op = combined_step(robot, head_on, goal, op, eng, np, 0.01).opinion;
    CHECK(op.z == 0.0);
    CHECK(op.u > 0.0);  // attention still rises

    // veering to its own left: positive perceived opinion drives z positive
    std::vector<Pose> veering = {Pose{{3.0, 0.6}, kPi + 0.4}};
    std::vector<OvalEngagement> eng2;
    update_engagements(robot, veering, np.oval, eng2);
    OpinionState op2{};
    for (int i = 0; i < 50; ++i)
        op2 = combined_step(robot, veering, goal, op2, eng2, np, 0.01).opinion;
    CHECK(op2.z > 0.0);
}

TEST_CASE("combined command mirrors exactly when the scene is reflected") {
    const NavParams np = default_params();
    SplitMix64 prng(101);
    for (int i = 0; i < 100; ++i) {
        const Pose robot{{prng.uniform(-3, 3), prng.uniform(-3, 3)},
                         wrap_angle(prng.uniform(-3, 3))};
        std::vector<Pose> humans = {
            Pose{{prng.uniform(-3, 3), prng.uniform(-3, 3)}, wrap_angle(prng.uniform(-3, 3))}};
        if (distance(humans[0].position, robot.position) < 0.05) continue;
        const Vec2 goal{prng.uniform(-5, 5), prng.uniform(-5, 5)};
        const OpinionState op{prng.uniform(-1, 1), prng.uniform(0, 1.5)};

        const Pose robot_m{{robot.position.x, -robot.position.y}, wrap_angle(-robot.heading)};
        std::vector<Pose> humans_m = {Pose{{humans[0].position.x, -humans[0].position.y},
                                           wrap_angle(-humans[0].heading)}};
        const Vec2 goal_m{goal.x, -goal.y};
        const OpinionState op_m{-op.z, op.u};

        std::vector<OvalEngagement> eng, eng_m;
        update_engagements(robot, humans, np.oval, eng);
        update_engagements(robot_m, humans_m, np.oval, eng_m);

        const auto a = combined_step(robot, humans, goal, op, eng, np, 0.01);
        const auto b = combined_step(robot_m, humans_m, goal_m, op_m, eng_m, np, 0.01);
        CHECK(a.cmd.omega == -b.cmd.omega);
        CHECK(a.cmd.v == b.cmd.v);
        CHECK(a.opinion.z == -b.opinion.z);
    }
}
