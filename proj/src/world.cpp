#include "pnav/world.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pnav {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
} // namespace

void WorldConfig::validate() const {
    validate_geo_point(origin);
    if (gps_sigma_m < 0.0 || gps_bias_walk_m_per_sqrt_s < 0.0 || compass_sigma_deg < 0.0)
        throw std::invalid_argument("noise sigmas must be >= 0");
    if (energy_offroad_j_per_m < energy_road_j_per_m)
        throw std::invalid_argument("off-road energy rate must be >= road rate");
    if (!(dt_s > 0.0))
        throw std::invalid_argument("dt must be > 0");
    if (!(robot_speed_mps > 0.0))
        throw std::invalid_argument("robot speed must be > 0");
    if (!(offroad_speed_factor > 0.0 && offroad_speed_factor <= 1.0))
        throw std::invalid_argument("off-road speed factor must be in (0, 1]");
    if (multipath.rate_per_s < 0.0 || multipath.mag_min_m > multipath.mag_max_m ||
        multipath.dur_min_s > multipath.dur_max_s)
        throw std::invalid_argument("bad multipath configuration");
    if (!(roads.width_m > 0.0))
        throw std::invalid_argument("road width must be > 0");
}

Pose kinematics_step(const Pose& pose, const SteeringCommand& steer,
                     double speed_mps, double turn_rate_deg_per_s, double dt_s) {
    if (!std::isfinite(pose.east_m) || !std::isfinite(pose.north_m) ||
        !std::isfinite(pose.heading_deg))
        throw std::invalid_argument("kinematics_step: non-finite pose");
    Pose next = pose;
    if (steer.direction != SteerDirection::Straight) {
        const double turn = std::fmin(turn_rate_deg_per_s * dt_s, steer.magnitude_deg);
        const double signed_turn = steer.direction == SteerDirection::Right ? turn : -turn;
        next.heading_deg = normalize_compass(pose.heading_deg + signed_turn);
    }
    const double h = next.heading_deg * kDegToRad;
    next.east_m += speed_mps * std::sin(h) * dt_s;
    next.north_m += speed_mps * std::cos(h) * dt_s;
    return next;
}

RoadProjection project_onto_road(double east_m, double north_m,
                                 const RoadNetwork& roads) {
    if (roads.empty())
        throw std::invalid_argument("project_onto_road: empty road network");
    RoadProjection best;
    best.distance_m = std::numeric_limits<double>::infinity();
    for (std::size_t pl = 0; pl < roads.polylines.size(); ++pl) {
        const auto& pts = roads.polylines[pl].points;
        double arc = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double ax = pts[i].east_m, ay = pts[i].north_m;
            const double bx = pts[i + 1].east_m, by = pts[i + 1].north_m;
            const double vx = bx - ax, vy = by - ay;
            const double len2 = vx * vx + vy * vy;
            double t = 0.0;
            if (len2 > 0.0) {
                t = ((east_m - ax) * vx + (north_m - ay) * vy) / len2;
                t = std::fmin(1.0, std::fmax(0.0, t));
            }
            const double px = ax + t * vx, py = ay + t * vy;
            const double d = std::hypot(east_m - px, north_m - py);
            const double seg_len = std::sqrt(len2);
            if (d < best.distance_m) {
                best.distance_m = d;
                best.point = {px, py};
                best.arc_m = arc + t * seg_len;
                if (seg_len > 0.0) best.tangent = {vx / seg_len, vy / seg_len};
                best.polyline = static_cast<int>(pl);
            }
            arc += seg_len;
        }
    }
    return best;
}

double distance_to_road(const Pose& pose, const WorldConfig& config) {
    return project_onto_road(pose.east_m, pose.north_m, config.roads).distance_m;
}

bool on_road(const Pose& pose, const WorldConfig& config) {
    if (config.roads.empty()) return false;
    return distance_to_road(pose, config) <= config.roads.width_m / 2.0;
}

double accrue_energy(const Pose& before, const Pose& after,
                     const WorldConfig& config) {
    const double len = std::hypot(after.east_m - before.east_m,
                                  after.north_m - before.north_m);
    Pose mid;
    mid.east_m = 0.5 * (before.east_m + after.east_m);
    mid.north_m = 0.5 * (before.north_m + after.north_m);
    const double rate = (!config.roads.empty() && on_road(mid, config))
                            ? config.energy_road_j_per_m
                            : config.energy_offroad_j_per_m;
    return len * rate;
}

SensorRig::SensorRig(const WorldConfig& config, std::uint64_t trial_seed,
                     double horizon_s)
    : config_(config),
      gps_stream_(make_stream(trial_seed, StreamId::Gps)),
      compass_stream_(make_stream(trial_seed, StreamId::Compass)) {
    config.validate();
    const auto& mp = config.multipath;
    if (mp.rate_per_s > 0.0) {
        Rng ep_stream = make_stream(trial_seed, StreamId::Multipath);
        double t = 0.0;
        while (true) {
            t += ep_stream.exponential(mp.rate_per_s);
            if (t >= horizon_s) break;
            Episode e;
            e.start_s = t;
            e.end_s = t + ep_stream.uniform(mp.dur_min_s, mp.dur_max_s);
            const double mag = ep_stream.uniform(mp.mag_min_m, mp.mag_max_m);
            const double ang = ep_stream.uniform(0.0, 2.0 * M_PI);
            e.off_east_m = mag * std::cos(ang);
            e.off_north_m = mag * std::sin(ang);
            episodes_.push_back(e);
        }
    }
}

SensorFrame SensorRig::sample(const Pose& pose, double clock_s) {
    const double sq = std::sqrt(config_.dt_s);
    bias_east_m_ += gps_stream_.normal(config_.gps_bias_walk_m_per_sqrt_s * sq);
    bias_north_m_ += gps_stream_.normal(config_.gps_bias_walk_m_per_sqrt_s * sq);

    double east = pose.east_m + bias_east_m_ + gps_stream_.normal(config_.gps_sigma_m);
    double north = pose.north_m + bias_north_m_ + gps_stream_.normal(config_.gps_sigma_m);
    for (const auto& e : episodes_) {
        if (e.start_s <= clock_s && clock_s < e.end_s) {
            east += e.off_east_m;
            north += e.off_north_m;
        }
    }

    SensorFrame frame;
    frame.gps_fix = enu_unproject(config_.origin, east, north);
    frame.compass_magnetic_deg = normalize_compass(
        pose.heading_deg - config_.declination_deg +
        compass_stream_.normal(config_.compass_sigma_deg));
    frame.on_road = on_road(pose, config_);
    return frame;
}

} // namespace pnav
