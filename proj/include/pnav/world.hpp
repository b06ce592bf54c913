#pragma once

#include <vector>

#include "pnav/geo.hpp"
#include "pnav/rng.hpp"

namespace pnav {

/// Point in the local metric frame (meters east/north of the site origin).
struct Vec2 {
    double east_m = 0.0;
    double north_m = 0.0;
};

struct RoadNetwork {
    struct Polyline {
        std::vector<Vec2> points;
    };
    std::vector<Polyline> polylines;
    double width_m = 2.0;

    bool empty() const { return polylines.empty(); }
};

/// GPS multipath episodes: intervals during which the fix carries a large
/// quasi-constant offset, as happens near buildings and under canopy. White
/// noise alone cannot delay waypoint finding (the control loop closes on the
/// measured position), so these episodes carry the site's "unreliable GPS"
/// behavior. Rate 0 disables them.
struct MultipathConfig {
    double rate_per_s = 0.0;  // Poisson onset rate
    double mag_min_m = 0.0;   // offset magnitude range
    double mag_max_m = 0.0;
    double dur_min_s = 0.0;   // episode duration range
    double dur_max_s = 0.0;
};

struct WorldConfig {
    GeoPoint origin;
    RoadNetwork roads;

    double gps_sigma_m = 3.0;               // per-axis white noise
    double gps_bias_walk_m_per_sqrt_s = 0.0; // slow bias random walk
    MultipathConfig multipath;

    double compass_sigma_deg = 3.0;
    double declination_deg = 11.5; // east-positive

    double energy_road_j_per_m = 1.0;
    double energy_offroad_j_per_m = 2.5;

    double robot_speed_mps = 1.4;
    double offroad_speed_factor = 1.0; // rough-terrain slowdown, 1 = none
    double turn_rate_deg_per_s = 45.0;
    double dt_s = 0.1;

    void validate() const;
};

struct Pose {
    double east_m = 0.0;
    double north_m = 0.0;
    double heading_deg = 0.0; // compass-normalized true heading
};

struct SensorFrame {
    GeoPoint gps_fix;
    double compass_magnetic_deg = 0.0;
    bool on_road = false; // ground truth, for reward/energy accounting only
};

/// Unicycle step: turn toward the command (rate-limited), then move forward.
Pose kinematics_step(const Pose& pose, const SteeringCommand& steer,
                     double speed_mps, double turn_rate_deg_per_s, double dt_s);

struct RoadProjection {
    double distance_m = 0.0; // perpendicular distance to the nearest segment
    Vec2 point;              // closest point on the network
    double arc_m = 0.0;      // arc length along the polyline at that point
    Vec2 tangent;            // unit tangent of the segment (in polyline order)
    int polyline = -1;
};

/// Closest-point query over all polylines. Network must be non-empty.
RoadProjection project_onto_road(double east_m, double north_m,
                                 const RoadNetwork& roads);

double distance_to_road(const Pose& pose, const WorldConfig& config);
bool on_road(const Pose& pose, const WorldConfig& config);

/// Energy for one motion increment: length times the road/off-road rate,
/// decided by the segment midpoint.
double accrue_energy(const Pose& before, const Pose& after,
                     const WorldConfig& config);

/// Stateful sensor models for one trial: owns the GPS noise state (bias walk,
/// multipath schedule) and the compass stream. All outputs are functions of
/// (config, seed, tick) only.
class SensorRig {
public:
    SensorRig(const WorldConfig& config, std::uint64_t trial_seed,
              double horizon_s);

    SensorFrame sample(const Pose& pose, double clock_s);

    struct Episode {
        double start_s, end_s;
        double off_east_m, off_north_m;
    };
    const std::vector<Episode>& episodes() const { return episodes_; }

private:
    const WorldConfig& config_;
    Rng gps_stream_;
    Rng compass_stream_;
    double bias_east_m_ = 0.0;
    double bias_north_m_ = 0.0;
    std::vector<Episode> episodes_;
};

} // namespace pnav
