#include <doctest.h>

#include <cmath>

#include "pnav/geo.hpp"
#include "pnav/rng.hpp"

using namespace pnav;

TEST_CASE("haversine identity and known distances") {
    CHECK(haversine_distance({0, 0}, {0, 0}) == 0.0);
    // one degree of latitude on the sphere: R * pi/180
    CHECK(std::fabs(haversine_distance({0, 0}, {1, 0}) - 111194.9266) < 0.1);
    // near-antipodal approaches pi*R
    const double d = haversine_distance({0, 0}, {0, 179.999999});
    CHECK(std::fabs(d - M_PI * kEarthRadiusM) < 1.0);
}

TEST_CASE("haversine rejects bad input") {
    CHECK_THROWS_AS(haversine_distance({NAN, 0}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(haversine_distance({0, 0}, {0, INFINITY}), std::invalid_argument);
    CHECK_THROWS_AS(haversine_distance({91, 0}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(haversine_distance({0, 180}, {0, 0}), std::invalid_argument);
}

TEST_CASE("haversine symmetry") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        GeoPoint a{rng.uniform(-80, 80), rng.uniform(-179, 179)};
        GeoPoint b{rng.uniform(-80, 80), rng.uniform(-179, 179)};
        CHECK(haversine_distance(a, b) == haversine_distance(b, a));
    }
}

TEST_CASE("initial bearing basics") {
    CHECK(initial_bearing({0, 0}, {1, 0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(initial_bearing({0, 0}, {0, 0.001}) == doctest::Approx(90.0).epsilon(1e-9));
    // off the equator an east-pointing parallel is not a great circle
    CHECK(initial_bearing({50.0, 0.0}, {50.0, 1.0}) ==
          doctest::Approx(89.6169737611).epsilon(1e-8));
    CHECK_THROWS_AS(initial_bearing({10, 10}, {10, 10}), DegenerateBearingError);
}

TEST_CASE("bearing reciprocal on equator and meridians") {
    // going a->b and b->a must differ by 180 degrees on these great circles
    const GeoPoint a{0, 10}, b{0, 40};
    const double fwd = initial_bearing(a, b);
    const double back = initial_bearing(b, a);
    CHECK(std::fabs(wrap_signed(back - fwd - 180.0)) < 1e-6);
    const GeoPoint m1{10, 5}, m2{35, 5};
    CHECK(std::fabs(wrap_signed(initial_bearing(m2, m1) -
                                initial_bearing(m1, m2) - 180.0)) < 1e-6);
}

TEST_CASE("wrap_signed range and idempotence") {
    CHECK(wrap_signed(370.0) == doctest::Approx(10.0));
    CHECK(wrap_signed(-190.0) == doctest::Approx(170.0));
    CHECK(wrap_signed(180.0) == 180.0); // boundary stays +180, never -180
    CHECK(wrap_signed(-180.0) == 180.0);
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const double x = rng.uniform(-2000.0, 2000.0);
        const double w = wrap_signed(x);
        CHECK(w > -180.0);
        CHECK(w <= 180.0);
        CHECK(wrap_signed(w) == w);
        // value-preserving mod 360
        CHECK(std::fabs(std::remainder(w - x, 360.0)) < 1e-9);
    }
}

TEST_CASE("steering command") {
    SUBCASE("wrap across north turns the short way") {
        const auto cmd = steering_command(10.0, 350.0);
        CHECK(cmd.direction == SteerDirection::Right);
        CHECK(cmd.magnitude_deg == doctest::Approx(20.0));
    }
    SUBCASE("symmetric case goes left") {
        const auto cmd = steering_command(350.0, 10.0);
        CHECK(cmd.direction == SteerDirection::Left);
        CHECK(cmd.magnitude_deg == doctest::Approx(20.0));
    }
    SUBCASE("deadband maps to straight") {
        CHECK(steering_command(90.0, 89.0).direction == SteerDirection::Straight);
    }
    SUBCASE("aligned is straight with zero magnitude") {
        for (double h : {0.0, 45.0, 180.0, 359.0}) {
            const auto cmd = steering_command(h, h);
            CHECK(cmd.direction == SteerDirection::Straight);
            CHECK(cmd.magnitude_deg == 0.0);
        }
    }
}

TEST_CASE("true heading from magnetic and declination") {
    CHECK(true_heading(0.0, 11.5) == doctest::Approx(11.5));
    CHECK(true_heading(355.0, 11.5) == doctest::Approx(6.5));
    CHECK(true_heading(20.0, 0.0) == doctest::Approx(20.0));
}

TEST_CASE("enu projection") {
    const GeoPoint origin{33.646, -117.842};
    SUBCASE("origin maps to zero") {
        const auto o = enu_project(origin, origin);
        CHECK(o.east_m == 0.0);
        CHECK(o.north_m == 0.0);
    }
    SUBCASE("100 m north is the expected latitude increment") {
        const GeoPoint p = enu_unproject(origin, 0.0, 100.0);
        CHECK(p.lat - origin.lat == doctest::Approx(0.0008993216).epsilon(1e-6));
        CHECK(p.lon == origin.lon);
    }
    SUBCASE("round trip within 1 cm for points inside 5 km") {
        Rng rng(11);
        double worst = 0.0;
        int tested = 0;
        while (tested < 1000) {
            const double e = rng.uniform(-5000.0, 5000.0);
            const double n = rng.uniform(-5000.0, 5000.0);
            if (std::hypot(e, n) >= 5000.0) continue;
            ++tested;
            const GeoPoint p = enu_unproject(origin, e, n);
            const auto back = enu_project(origin, p);
            worst = std::fmax(worst, std::hypot(back.east_m - e, back.north_m - n));
        }
        CHECK(worst < 0.01);
    }
    SUBCASE("outside the domain is rejected") {
        CHECK_THROWS_AS(enu_project(origin, {33.646, -110.0}), std::domain_error);
        CHECK_THROWS_AS(enu_unproject(origin, 20000.0, 0.0), std::domain_error);
    }
}
