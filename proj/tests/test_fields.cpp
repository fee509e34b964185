#include <doctest.h>

#include <cmath>

#include "socnav/fields.hpp"
#include "socnav/prng.hpp"

using namespace socnav;

namespace {

// Ray-casting inside test, independent of rho(): march a vertical ray from
// below the bounding box and count crossings of the boundary comparator
//   (1 - (x1/b1)^2) e^{-nu x1} - (x2/b2)^2 = 0,
// which is the curve solved for x2 on paper.
bool ray_cast_inside(const OvalSpec& o, double x1, double x2) {
    auto comparator = [&](double s) {
        return (1.0 - (x1 / o.b1) * (x1 / o.b1)) * std::exp(-o.nu * x1) -
               (s / o.b2) * (s / o.b2);
    };
    const double y0 = -3.0 * o.b2;
    const int steps = 4000;
    int crossings = 0;
    double prev = comparator(y0);
    for (int i = 1; i <= steps; ++i) {
        const double s = y0 + (x2 - y0) * i / steps;
        const double cur = comparator(s);
        if ((prev <= 0.0 && cur > 0.0) || (prev > 0.0 && cur <= 0.0)) ++crossings;
        prev = cur;
    }
    return crossings % 2 == 1;
}

}  // namespace

TEST_CASE("rho at the center and on the curve") {
    const OvalSpec o;
    CHECK(rho(o, 0.0, 0.0) == doctest::Approx(1.0));
    CHECK(rho(o, o.b1, 0.0) == doctest::Approx(0.0));
    CHECK(rho(o, 0.0, o.b2) == doctest::Approx(0.0));
}

TEST_CASE("rho sign partitions the plane like the ray-casting oracle") {
    const OvalSpec o;
    for (double x1 = -3.4; x1 <= 3.4; x1 += 0.4) {
        for (double x2 = -8.8; x2 <= 8.8; x2 += 0.8) {
            const double r = rho(o, x1, x2);
            if (std::fabs(r) < 1e-6) continue;  // skip the curve itself
            CHECK((r > 0.0) == ray_cast_inside(o, x1, x2));
        }
    }
}

TEST_CASE("feedforward pinned values") {
    const OvalSpec o;  // b1=2.5, b2=5, nu=0.5
    const Vec2 zero = feedforward(o, 0.0, 0.0);
    CHECK(zero.x == 0.0);
    CHECK(zero.y == 0.0);

    const Vec2 f = feedforward(o, 0.0, o.b2);
    CHECK(f.x == doctest::Approx(-2.5).epsilon(1e-12));
    CHECK(f.y == doctest::Approx(0.5).epsilon(1e-12));

    OvalSpec ell = o;
    ell.nu = 0.0;
    const Vec2 apex = feedforward(ell, ell.b1, 0.0);
    CHECK(apex.x == 0.0);
    CHECK(apex.y == doctest::Approx(ell.b2));
}

TEST_CASE("feedforward reduces to the circular vortex when nu=0 and b1=b2") {
    OvalSpec o;
    o.b1 = o.b2 = 2.0;
    o.nu = 0.0;
    SplitMix64 prng(17);
    for (int i = 0; i < 100; ++i) {
        const double x1 = prng.uniform(-3, 3), x2 = prng.uniform(-3, 3);
        const Vec2 f = feedforward(o, x1, x2);
        CHECK(f.x == doctest::Approx(-x2).epsilon(1e-12));
        CHECK(f.y == doctest::Approx(x1).epsilon(1e-12));
    }
}

TEST_CASE("feedback vanishes on the curve and points out of the translation") {
    const OvalSpec o;  // x_t = 1.25
    const Vec2 on_curve = feedback(o, o.b1, 0.0);
    CHECK(on_curve.x == doctest::Approx(0.0));
    CHECK(on_curve.y == doctest::Approx(0.0));

    const Vec2 center = feedback(o, 0.0, 0.0);
    CHECK(center.x == doctest::Approx(-1.25));
    CHECK(center.y == 0.0);

    const Vec2 top = feedback(o, 0.0, o.b2);
    CHECK(top.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(top.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("feedback is repulsive inside and attractive outside") {
    const OvalSpec o;
    SplitMix64 prng(23);
    for (int i = 0; i < 300; ++i) {
        const double x1 = prng.uniform(-3.5, 3.5), x2 = prng.uniform(-9, 9);
        const double r = rho(o, x1, x2);
        const Vec2 fb = feedback(o, x1, x2);
        const double inner = fb.x * (x1 - o.x_t) + fb.y * x2;
        if (r > 0) CHECK(inner >= 0.0);
        if (r < 0) CHECK(inner <= 0.0);
    }
}

TEST_CASE("attractive_force is a unit-direction pull with goal-radius cutoff") {
    const Vec2 f1 = attractive_force({0, 0}, {2, 0}, 1.0);
    CHECK(f1.x == doctest::Approx(1.0));
    CHECK(f1.y == doctest::Approx(0.0));

    const Vec2 f2 = attractive_force({0, 0}, {0, -3}, 2.0);
    CHECK(f2.x == doctest::Approx(0.0));
    CHECK(f2.y == doctest::Approx(-2.0));

    const Vec2 f3 = attractive_force({0, 0}, {0.05, 0}, 1.0, 0.1);
    CHECK(f3.x == 0.0);
    CHECK(f3.y == 0.0);
}

TEST_CASE("build_oval_frame aims at the robot with the translated center") {
    const OvalSpec o;
    const OvalFrame f1 = build_oval_frame({0, 0}, {3, 0}, o);
    CHECK(f1.center.x == doctest::Approx(1.25));
    CHECK(f1.center.y == doctest::Approx(0.0));
    CHECK(f1.axis_angle == doctest::Approx(0.0));

    const OvalFrame f2 = build_oval_frame({0, 0}, {0, 2}, o);
    CHECK(f2.center.x == doctest::Approx(0.0));
    CHECK(f2.center.y == doctest::Approx(1.25));
    CHECK(f2.axis_angle == doctest::Approx(kPi / 2.0));

    // the human sits at (-x_t, 0) in its own frame
    const Vec2 local = world_to_oval(f2, {0, 0});
    CHECK(local.x == doctest::Approx(-o.x_t));
    CHECK(local.y == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(build_oval_frame({1, 1}, {1, 1}, o), std::invalid_argument);
}

TEST_CASE("vortex_force gates, scales and caps") {
    OvalSpec o;
    o.x_t = 0.0;
    o.alpha1 = o.alpha2 = 1.0;
    const FieldParams fp;  // k_rep_base = 1, f_max = 5
    const OvalFrame identity{{0, 0}, 0.0};

    // outside the oval: exactly zero
    const Vec2 out = vortex_force(o, identity, {10.0, 0.0}, -1, 1.5, 1.5, fp);
    CHECK(out.x == 0.0);
    CHECK(out.y == 0.0);

    // zero attention: zero force anywhere
    const Vec2 cold = vortex_force(o, identity, {1.0, 0.0}, -1, 0.0, 1.5, fp);
    CHECK(cold.x == 0.0);
    CHECK(cold.y == 0.0);

    // composed value at the top of the untranslated oval, full attention
    const Vec2 f = vortex_force(o, identity, {0.0, o.b2}, -1, 1.5, 1.5, fp);
    CHECK(f.x == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(f.y == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("vortex_force magnitude never exceeds f_max") {
    const OvalSpec o;
    const FieldParams fp;
    SplitMix64 prng(31);
    for (int i = 0; i < 500; ++i) {
        const OvalFrame frame{{prng.uniform(-2, 2), prng.uniform(-2, 2)},
                              wrap_angle(prng.uniform(-3, 3))};
        const Vec2 robot{prng.uniform(-8, 8), prng.uniform(-8, 8)};
        const int gamma = prng.sign();
        const double u = prng.uniform(0.0, 1.5);
        const Vec2 f = vortex_force(o, frame, robot, gamma, u, 1.5, fp);
        CHECK(f.norm() <= fp.f_max + 1e-12);
    }
}

TEST_CASE("limit_cycle_flow is purely tangential on the curve and linear in gamma") {
    OvalSpec o;
    o.x_t = 0.0;
    // on-curve: the feedback part vanishes, so the field is odd in gamma
    const Vec2 plus = limit_cycle_flow(o, o.b1, 0.0, +1);
    const Vec2 minus = limit_cycle_flow(o, o.b1, 0.0, -1);
    CHECK(plus.x == doctest::Approx(-minus.x).epsilon(1e-12));
    CHECK(plus.y == doctest::Approx(-minus.y).epsilon(1e-12));

    // generally: half the sum is the gamma-independent feedback component
    SplitMix64 prng(13);
    for (int i = 0; i < 100; ++i) {
        const double x1 = prng.uniform(-3, 3), x2 = prng.uniform(-7, 7);
        const Vec2 p = limit_cycle_flow(o, x1, x2, +1);
        const Vec2 m = limit_cycle_flow(o, x1, x2, -1);
        const double r = rho(o, x1, x2);
        CHECK(0.5 * (p.x + m.x) == doctest::Approx(o.alpha1 * (x1 / o.b1) * r * o.b1)
                                        .epsilon(1e-9));
        CHECK(0.5 * (p.y + m.y) ==
              doctest::Approx(o.alpha2 * (x2 / o.b2) * r * o.b2).epsilon(1e-9));
    }
}

TEST_CASE("limit_cycle_flow trajectories converge onto the curve") {
    OvalSpec o;
    o.x_t = 0.0;
    double x1 = 0.1, x2 = 0.1;
    const double dt = 0.002;
    double final_abs_rho = 1e9;
    for (double t = 0.0; t < 20.0; t += dt) {
        const Vec2 f = limit_cycle_flow(o, x1, x2, +1);
        x1 += dt * f.x;
        x2 += dt * f.y;
        final_abs_rho = std::fabs(rho(o, x1, x2));
    }
    CHECK(final_abs_rho < 0.05);
}
