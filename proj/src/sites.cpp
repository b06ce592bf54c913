#include "pnav/sites.hpp"

#include <cmath>
#include <stdexcept>

namespace pnav {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

// Course geometry knobs, shared by both parks' layouts.
constexpr int kCourseWaypoints = 10;
constexpr double kEncSpacingM = 52.0;
constexpr double kEncTurnDeg = 85.0;
constexpr double kAldSpacingM = 54.0;
constexpr double kAldTurnDeg = 65.0;
constexpr double kAldFirstLegDeg = 20.0;
constexpr double kStartOffsetM = 45.0; // start pose south of WP1
constexpr double kAldPathSagittaM = 20.0; // winding-path bulge per leg
constexpr double kAldPathWidthM = 3.0;

std::vector<Vec2> zigzag_course(int n, double spacing, double turn_deg,
                                double first_leg_deg) {
    std::vector<Vec2> pts;
    pts.push_back({0.0, 0.0});
    double dir = first_leg_deg;
    for (int i = 1; i < n; ++i) {
        dir += (i % 2 == 1) ? turn_deg : -turn_deg;
        const Vec2& last = pts.back();
        pts.push_back({last.east_m + spacing * std::sin(dir * kDegToRad),
                       last.north_m + spacing * std::cos(dir * kDegToRad)});
    }
    return pts;
}

// Circular arc from a to b with the given sagitta, bulging to `side`
// (+1 = left of a->b). Returns interior points only.
std::vector<Vec2> arc_between(const Vec2& a, const Vec2& b, double sagitta,
                              double side, int samples = 14) {
    std::vector<Vec2> out;
    const double dx = b.east_m - a.east_m, dy = b.north_m - a.north_m;
    const double chord = std::hypot(dx, dy);
    const double ux = dx / chord, uy = dy / chord;
    const double px = -uy * side, py = ux * side;
    const double half = chord / 2.0;
    const double radius = (half * half + sagitta * sagitta) / (2.0 * sagitta);
    const Vec2 center{(a.east_m + b.east_m) / 2.0 + px * (sagitta - radius),
                      (a.north_m + b.north_m) / 2.0 + py * (sagitta - radius)};
    const Vec2 apex{(a.east_m + b.east_m) / 2.0 + px * sagitta,
                    (a.north_m + b.north_m) / 2.0 + py * sagitta};
    const double a0 = std::atan2(a.north_m - center.north_m, a.east_m - center.east_m);
    const double am = std::atan2(apex.north_m - center.north_m, apex.east_m - center.east_m);
    const double a1 = std::atan2(b.north_m - center.north_m, b.east_m - center.east_m);
    auto wrap = [](double t) {
        while (t <= -M_PI) t += 2.0 * M_PI;
        while (t > M_PI) t -= 2.0 * M_PI;
        return t;
    };
    const double d0 = wrap(am - a0), d1 = wrap(a1 - am);
    for (int i = 1; i < samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        const double ang = t <= 0.5 ? a0 + d0 * (2.0 * t) : am + d1 * (2.0 * t - 1.0);
        out.push_back({center.east_m + radius * std::cos(ang),
                       center.north_m + radius * std::sin(ang)});
    }
    return out;
}

MissionPlan plan_from_course(const GeoPoint& origin, const std::vector<Vec2>& pts) {
    MissionPlan plan;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Waypoint wp;
        wp.label = "WP" + std::to_string(i + 1);
        wp.point = enu_unproject(origin, pts[i].east_m, pts[i].north_m);
        plan.waypoints.push_back(std::move(wp));
    }
    return plan;
}

RoadNetwork winding_path(const std::vector<Vec2>& course, double sagitta,
                         double width) {
    RoadNetwork net;
    net.width_m = width;
    RoadNetwork::Polyline line;
    line.points.push_back(course.front());
    for (std::size_t i = 0; i + 1 < course.size(); ++i) {
        const double side = (i % 2 == 0) ? -1.0 : 1.0;
        for (const auto& p : arc_between(course[i], course[i + 1], sagitta, side))
            line.points.push_back(p);
        line.points.push_back(course[i + 1]);
    }
    net.polylines.push_back(std::move(line));
    return net;
}

Site make_encinitas() {
    Site site;
    site.name = "encinitas";
    site.world.origin = {33.0369, -117.2935};
    site.world.gps_sigma_m = 3.0;
    site.world.gps_bias_walk_m_per_sqrt_s = 0.0;
    site.world.multipath = {1.0 / 100.0, 25.0, 65.0, 40.0, 90.0};
    site.world.compass_sigma_deg = 3.0;
    site.world.declination_deg = 11.5;
    site.world.offroad_speed_factor = 1.0;

    const auto course = zigzag_course(kCourseWaypoints, kEncSpacingM, kEncTurnDeg, 0.0);
    site.plan = plan_from_course(site.world.origin, course);
    // A flat mowed park: no path network needed for navigation or energy.
    site.world.roads = {};
    site.start = {0.0, -kStartOffsetM, 0.0};
    return site;
}

Site make_aldrich() {
    Site site;
    site.name = "aldrich";
    site.world.origin = {33.6459, -117.8427};
    site.world.gps_sigma_m = 10.0;
    site.world.gps_bias_walk_m_per_sqrt_s = 0.5;
    site.world.multipath = {1.0 / 160.0, 32.0, 55.0, 30.0, 60.0};
    site.world.compass_sigma_deg = 3.0;
    site.world.declination_deg = 11.5;
    site.world.offroad_speed_factor = 0.60; // hilly rough ground off the paths

    const auto course =
        zigzag_course(kCourseWaypoints, kAldSpacingM, kAldTurnDeg, kAldFirstLegDeg);
    site.plan = plan_from_course(site.world.origin, course);
    site.world.roads = winding_path(course, kAldPathSagittaM, kAldPathWidthM);
    site.start = {0.0, -kStartOffsetM, 0.0};
    return site;
}

} // namespace

Site make_site(const std::string& name) {
    if (name == "encinitas") return make_encinitas();
    if (name == "aldrich") return make_aldrich();
    throw std::invalid_argument("unknown site: " + name);
}

std::vector<std::string> site_names() { return {"encinitas", "aldrich"}; }

Track make_track(const std::string& name) {
    Track track;
    if (name == "straight") {
        track.road.width_m = 2.0;
        RoadNetwork::Polyline line;
        for (int i = 0; i <= 50; ++i) line.points.push_back({0.0, 2.0 * i});
        track.road.polylines.push_back(std::move(line));
        track.start = {0.0, 0.0, 0.0};
        track.length_m = 100.0;
        return track;
    }
    if (name == "scurve") {
        // 10 m lead-in, a 90-degree right arc and a 90-degree left arc of
        // 25 m radius, 15 m run-out. Width matches the aldrich paths so a
        // policy trained here transfers.
        track.road.width_m = kAldPathWidthM;
        RoadNetwork::Polyline line;
        double e = 0.0, n = 0.0, heading = 0.0; // north
        auto emit = [&](double step_m) {
            e += step_m * std::sin(heading * kDegToRad);
            n += step_m * std::cos(heading * kDegToRad);
            line.points.push_back({e, n});
        };
        line.points.push_back({0.0, 0.0});
        for (int i = 0; i < 5; ++i) emit(2.0);
        const double arc_step_deg = 4.5; // 25 m radius, ~2 m chords
        for (int i = 0; i < 20; ++i) { heading += arc_step_deg; emit(2.0); }
        for (int i = 0; i < 20; ++i) { heading -= arc_step_deg; emit(2.0); }
        for (int i = 0; i < 8; ++i) emit(2.0);
        track.road.polylines.push_back(std::move(line));
        track.start = {0.0, 0.0, 0.0};
        double len = 0.0;
        const auto& pts = track.road.polylines[0].points;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            len += std::hypot(pts[i + 1].east_m - pts[i].east_m,
                              pts[i + 1].north_m - pts[i].north_m);
        track.length_m = len;
        return track;
    }
    throw std::invalid_argument("unknown track: " + name);
}

std::vector<std::string> track_names() { return {"scurve", "straight"}; }

} // namespace pnav
