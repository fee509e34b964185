#include <doctest.h>

#include <cmath>

#include "socnav/geometry.hpp"
#include "socnav/prng.hpp"

using namespace socnav;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));  // boundary goes to the closed side
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));

    SplitMix64 prng(7);
    for (int i = 0; i < 1000; ++i) {
        const double a = prng.uniform(-50.0, 50.0);
        const double w = wrap_angle(a);
        CHECK(w > -kPi);
        CHECK(w <= kPi);
        CHECK(wrap_angle(w) == w);  // idempotent
        // differs from the input by a whole number of turns
        CHECK(std::remainder(a - w, 2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(wrap_angle(std::nan("")), std::invalid_argument);
}

TEST_CASE("relative_bearing sign convention: positive means left") {
    const Pose at_origin{{0, 0}, 0.0};
    CHECK(relative_bearing(at_origin, {1, 1}) == doctest::Approx(kPi / 4.0));
    CHECK(relative_bearing(at_origin, {1, 0}) == doctest::Approx(0.0));
    CHECK(relative_bearing(Pose{{0, 0}, kPi / 2.0}, {1, 0}) == doctest::Approx(-kPi / 2.0));
    CHECK_THROWS_AS(relative_bearing(at_origin, {0, 0}), std::invalid_argument);
}

TEST_CASE("world/oval transforms") {
    CHECK(world_to_oval({{0, 0}, 0.0}, {2, 3}).x == doctest::Approx(2.0));
    CHECK(world_to_oval({{0, 0}, 0.0}, {2, 3}).y == doctest::Approx(3.0));

    const Vec2 p = world_to_oval({{1, 0}, kPi / 2.0}, {1, 2});
    CHECK(p.x == doctest::Approx(2.0));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(oval_to_world_vec({{5, -3}, 0.0}, {1, 0}).x == doctest::Approx(1.0));
    const Vec2 v = oval_to_world_vec({{5, -3}, kPi / 2.0}, {1, 0});
    CHECK(v.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v.y == doctest::Approx(1.0));
}

TEST_CASE("transform round trip and isometry over random frames") {
    SplitMix64 prng(42);
    for (int i = 0; i < 100; ++i) {
        const OvalFrame frame{{prng.uniform(-10, 10), prng.uniform(-10, 10)},
                              wrap_angle(prng.uniform(-8, 8))};
        const Vec2 p{prng.uniform(-10, 10), prng.uniform(-10, 10)};
        const Vec2 back = oval_to_world(frame, world_to_oval(frame, p));
        CHECK(std::fabs(back.x - p.x) < 1e-12);
        CHECK(std::fabs(back.y - p.y) < 1e-12);

        const Vec2 w = oval_to_world_vec(frame, p);
        CHECK(w.norm() == doctest::Approx(p.norm()).epsilon(1e-12));
    }
}
