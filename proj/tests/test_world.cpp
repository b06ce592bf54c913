#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pnav/sites.hpp"
#include "pnav/world.hpp"

using namespace pnav;

namespace {

WorldConfig flat_world() {
    WorldConfig w;
    w.origin = {33.0, -117.0};
    w.gps_sigma_m = 0.0;
    w.gps_bias_walk_m_per_sqrt_s = 0.0;
    w.compass_sigma_deg = 0.0;
    return w;
}

RoadNetwork straight_road(double width = 2.0) {
    RoadNetwork net;
    net.width_m = width;
    RoadNetwork::Polyline line;
    for (int i = 0; i <= 20; ++i) line.points.push_back({0.0, 10.0 * i});
    net.polylines.push_back(std::move(line));
    return net;
}

} // namespace

TEST_CASE("kinematics step") {
    SUBCASE("north and east translation") {
        Pose p{0, 0, 0};
        p = kinematics_step(p, {SteerDirection::Straight, 0.0}, 1.0, 45.0, 1.0);
        CHECK(p.east_m == doctest::Approx(0.0));
        CHECK(p.north_m == doctest::Approx(1.0));
        Pose e{0, 0, 90};
        e = kinematics_step(e, {SteerDirection::Straight, 0.0}, 1.0, 45.0, 1.0);
        CHECK(e.east_m == doctest::Approx(1.0));
        CHECK(e.north_m == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("straight command is a heading fixed point") {
        Pose p{5, 5, 123.0};
        for (int i = 0; i < 20; ++i)
            p = kinematics_step(p, {SteerDirection::Straight, 0.0}, 1.4, 45.0, 0.1);
        CHECK(p.heading_deg == 123.0);
    }
    SUBCASE("turn is rate-limited") {
        Pose p{0, 0, 0};
        p = kinematics_step(p, {SteerDirection::Right, 90.0}, 1.0, 45.0, 0.1);
        CHECK(p.heading_deg == doctest::Approx(4.5));
        p = kinematics_step(p, {SteerDirection::Left, 1.0}, 1.0, 45.0, 0.1);
        CHECK(p.heading_deg == doctest::Approx(3.5));
    }
    SUBCASE("non-finite pose is rejected") {
        CHECK_THROWS_AS(kinematics_step({NAN, 0, 0}, {}, 1.0, 45.0, 0.1),
                        std::invalid_argument);
    }
}

TEST_CASE("road geometry") {
    WorldConfig w = flat_world();
    w.roads = straight_road();

    SUBCASE("centerline and boundary") {
        CHECK(on_road({0.0, 50.0, 0}, w));
        CHECK(distance_to_road({0.0, 50.0, 0}, w) == doctest::Approx(0.0));
        CHECK(on_road({1.0, 50.0, 0}, w));        // exactly half width
        CHECK_FALSE(on_road({1.01, 50.0, 0}, w)); // just outside
    }
    SUBCASE("arc length and tangent") {
        const auto proj = project_onto_road(3.0, 42.0, w.roads);
        CHECK(proj.arc_m == doctest::Approx(42.0));
        CHECK(proj.tangent.north_m == doctest::Approx(1.0));
        CHECK(proj.tangent.east_m == doctest::Approx(0.0));
    }
    SUBCASE("matches a brute-force minimum over random networks") {
        Rng rng(17);
        for (int trial = 0; trial < 20; ++trial) {
            RoadNetwork net;
            net.width_m = 2.0;
            for (int pl = 0; pl < 3; ++pl) {
                RoadNetwork::Polyline line;
                double e = rng.uniform(-100, 100), n = rng.uniform(-100, 100);
                line.points.push_back({e, n});
                for (int i = 0; i < 6; ++i) {
                    e += rng.uniform(-40, 40);
                    n += rng.uniform(-40, 40);
                    line.points.push_back({e, n});
                }
                net.polylines.push_back(std::move(line));
            }
            for (int probe = 0; probe < 50; ++probe) {
                const double pe = rng.uniform(-150, 150);
                const double pn = rng.uniform(-150, 150);
                const auto proj = project_onto_road(pe, pn, net);
                double best = INFINITY;
                for (const auto& pl : net.polylines) {
                    for (std::size_t i = 0; i + 1 < pl.points.size(); ++i) {
                        const auto& a = pl.points[i];
                        const auto& b = pl.points[i + 1];
                        const double vx = b.east_m - a.east_m;
                        const double vy = b.north_m - a.north_m;
                        const double len2 = vx * vx + vy * vy;
                        double t = len2 > 0
                                       ? ((pe - a.east_m) * vx + (pn - a.north_m) * vy) / len2
                                       : 0.0;
                        t = std::clamp(t, 0.0, 1.0);
                        best = std::min(best, std::hypot(pe - (a.east_m + t * vx),
                                                         pn - (a.north_m + t * vy)));
                    }
                }
                CHECK(proj.distance_m == doctest::Approx(best).epsilon(1e-12));
            }
        }
    }
    SUBCASE("empty network is rejected") {
        RoadNetwork empty;
        CHECK_THROWS_AS(project_onto_road(0, 0, empty), std::invalid_argument);
    }
}

TEST_CASE("energy accounting") {
    WorldConfig w = flat_world();
    w.roads = straight_road();

    SUBCASE("on-road and off-road rates") {
        CHECK(accrue_energy({0, 10, 0}, {0, 20, 0}, w) == doctest::Approx(10.0));
        CHECK(accrue_energy({50, 10, 0}, {50, 20, 0}, w) == doctest::Approx(25.0));
    }
    SUBCASE("mixed path lies between the bounds") {
        const double e = accrue_energy({0.5, 10, 0}, {3.0, 10, 0}, w);
        CHECK(e >= 2.5 * 1.0);
        CHECK(e <= 2.5 * 2.5);
    }
    SUBCASE("additive and stable under re-discretization") {
        auto integrate = [&](double step) {
            double total = 0.0;
            Pose prev{-20.0, 30.0, 0};
            const double len = 40.0;
            const int n = static_cast<int>(len / step);
            for (int i = 1; i <= n; ++i) {
                Pose cur{-20.0 + i * step, 30.0 + 0.3 * i * step, 0};
                total += accrue_energy(prev, cur, w);
                prev = cur;
            }
            return total;
        };
        const double coarse = integrate(0.14);
        const double fine = integrate(0.07);
        CHECK(std::fabs(coarse - fine) / fine < 0.01);
    }
}

TEST_CASE("gps noise model") {
    SUBCASE("noiseless fixes are exact") {
        WorldConfig w = flat_world();
        SensorRig rig(w, 42, 100.0);
        const Pose pose{120.0, -80.0, 0};
        const auto frame = rig.sample(pose, 0.0);
        const auto enu = enu_project(w.origin, frame.gps_fix);
        CHECK(enu.east_m == doctest::Approx(120.0).epsilon(1e-9));
        CHECK(enu.north_m == doctest::Approx(-80.0).epsilon(1e-9));
    }
    SUBCASE("white-noise spread matches sigma within sampling error") {
        WorldConfig w = flat_world();
        w.gps_sigma_m = 10.0;
        SensorRig rig(w, 4242, 10000.0);
        const Pose pose{0, 0, 0};
        double se = 0, sn = 0, se2 = 0, sn2 = 0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            const auto enu = enu_project(w.origin, rig.sample(pose, 0.0).gps_fix);
            se += enu.east_m;
            sn += enu.north_m;
            se2 += enu.east_m * enu.east_m;
            sn2 += enu.north_m * enu.north_m;
        }
        const double sd_e = std::sqrt(se2 / n - (se / n) * (se / n));
        const double sd_n = std::sqrt(sn2 / n - (sn / n) * (sn / n));
        CHECK(std::fabs(sd_e - 10.0) < 0.3);
        CHECK(std::fabs(sd_n - 10.0) < 0.3);
    }
    SUBCASE("same seed replays the same fix sequence") {
        WorldConfig w = flat_world();
        w.gps_sigma_m = 5.0;
        w.gps_bias_walk_m_per_sqrt_s = 0.5;
        w.multipath = {0.01, 20, 50, 10, 30};
        SensorRig a(w, 7, 500.0), b(w, 7, 500.0);
        for (int i = 0; i < 200; ++i) {
            const Pose pose{i * 0.1, i * 0.05, 0};
            const auto fa = a.sample(pose, i * 0.1);
            const auto fb = b.sample(pose, i * 0.1);
            CHECK(fa.gps_fix.lat == fb.gps_fix.lat);
            CHECK(fa.gps_fix.lon == fb.gps_fix.lon);
            CHECK(fa.compass_magnetic_deg == fb.compass_magnetic_deg);
        }
    }
    SUBCASE("multipath episodes shift the fix while active") {
        WorldConfig w = flat_world();
        w.multipath = {0.002, 30, 30, 20, 20}; // sparse, fixed magnitude/duration
        SensorRig rig(w, 99, 5000.0);
        REQUIRE(!rig.episodes().empty());
        // pick an episode that overlaps no other
        const auto& eps = rig.episodes();
        std::size_t pick = eps.size();
        for (std::size_t i = 0; i < eps.size(); ++i) {
            bool isolated = eps[i].start_s > 1.0;
            for (std::size_t j = 0; j < eps.size(); ++j) {
                if (i == j) continue;
                if (eps[j].start_s < eps[i].end_s && eps[i].start_s - 1.0 < eps[j].end_s)
                    isolated = false;
            }
            if (isolated) {
                pick = i;
                break;
            }
        }
        REQUIRE(pick < eps.size());
        const auto& ep = eps[pick];
        const Pose pose{0, 0, 0};
        const auto inside = rig.sample(pose, 0.5 * (ep.start_s + ep.end_s));
        const auto enu = enu_project(w.origin, inside.gps_fix);
        CHECK(std::hypot(enu.east_m, enu.north_m) == doctest::Approx(30.0).epsilon(1e-6));
        const auto before = rig.sample(pose, ep.start_s - 0.5);
        const auto enu2 = enu_project(w.origin, before.gps_fix);
        CHECK(std::hypot(enu2.east_m, enu2.north_m) < 1e-6);
    }
}

TEST_CASE("compass model inverts true_heading exactly at zero noise") {
    WorldConfig w = flat_world();
    w.declination_deg = 11.5;
    SensorRig rig(w, 5, 100.0);
    for (double h : {0.0, 11.5, 90.0, 355.0}) {
        const auto frame = rig.sample({0, 0, h}, 0.0);
        CHECK(true_heading(frame.compass_magnetic_deg, w.declination_deg) ==
              doctest::Approx(h).epsilon(1e-12));
    }
    SUBCASE("known case: true 11.5 reads magnetic 0") {
        const auto frame = rig.sample({0, 0, 11.5}, 0.0);
        CHECK(frame.compass_magnetic_deg == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("compass noise spread") {
    WorldConfig w = flat_world();
    w.compass_sigma_deg = 3.0;
    SensorRig rig(w, 31337, 10000.0);
    double sum = 0, sum2 = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const auto frame = rig.sample({0, 0, 180.0}, 0.0);
        const double err = wrap_signed(true_heading(frame.compass_magnetic_deg,
                                                    w.declination_deg) - 180.0);
        sum += err;
        sum2 += err * err;
    }
    const double sd = std::sqrt(sum2 / n - (sum / n) * (sum / n));
    CHECK(std::fabs(sd - 3.0) < 0.2);
}

TEST_CASE("zero-noise closed loop reaches waypoints without limit cycles") {
    // steer-by-bearing against the true position must arrive within the
    // radius in bounded time for targets all around, including behind
    for (double angle = 0.0; angle < 360.0; angle += 45.0) {
        const double rad = angle * M_PI / 180.0;
        const Vec2 target{400.0 * std::sin(rad), 400.0 * std::cos(rad)};
        Pose pose{0, 0, 0};
        bool arrived = false;
        for (int tick = 0; tick < 20000; ++tick) {
            const double d = std::hypot(target.east_m - pose.east_m,
                                        target.north_m - pose.north_m);
            if (d < 20.0) {
                arrived = true;
                break;
            }
            const double bearing = normalize_compass(
                std::atan2(target.east_m - pose.east_m,
                           target.north_m - pose.north_m) * 180.0 / M_PI);
            pose = kinematics_step(pose, steering_command(bearing, pose.heading_deg),
                                   1.4, 45.0, 0.1);
        }
        CHECK(arrived);
    }
}

TEST_CASE("bundled sites validate") {
    for (const auto& name : site_names()) {
        const Site site = make_site(name);
        site.world.validate();
        site.plan.validate();
        CHECK(site.plan.waypoints.size() == 10);
        // consecutive spacing within the documented 50-60 m band
        for (std::size_t i = 0; i + 1 < site.plan.waypoints.size(); ++i) {
            const double d = haversine_distance(site.plan.waypoints[i].point,
                                                site.plan.waypoints[i + 1].point);
            CHECK(d >= 50.0);
            CHECK(d <= 60.0);
        }
    }
    CHECK_THROWS_AS(make_site("nowhere"), std::invalid_argument);
}
