#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pnav/config.hpp"
#include "pnav/mission.hpp"
#include "pnav/nn.hpp"
#include "pnav/world.hpp"

namespace pnav {

struct TrajectoryPoint {
    double time_s = 0.0;
    GeoPoint fix;      // the noisy GPS reading the robot acted on
    bool on_road = false;
    double energy_j = 0.0; // cumulative
};

struct SkipRecord {
    int from_index = 0;
    int to_index = 0;
    double elapsed_s = 0.0; // search time at the trigger
    double time_s = 0.0;    // mission clock at the trigger
};

struct TrialResult {
    int index = 0;
    std::uint64_t seed = 0;
    std::vector<MissionEvent> events;
    std::vector<SkipRecord> skips;
    int waypoints_reached = 0;
    bool completed = false;
    double total_time_s = 0.0;
    double total_energy_j = 0.0;
    std::vector<TrajectoryPoint> trajectory;
};

struct Aggregate {
    int trials = 0;
    int total_skips = 0;
    // mean over skip events; absent when no skips occurred
    std::optional<double> mean_time_before_skip_s;
    double mean_completion_time_s = 0.0; // over completed trials
    double completion_rate = 0.0;
    double mean_waypoints_reached = 0.0;
    double mean_energy_j = 0.0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<TrialResult> trials;
    Aggregate aggregate;
};

Aggregate compute_aggregate(const std::vector<TrialResult>& trials);

/// Steering source for road mode: a trained value network, or the
/// mask-centroid follower when no network is given.
struct RoadFollower {
    const DenseNet* net = nullptr;
};

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index);

/// One full mission: sensors -> mission state machine -> steering ->
/// kinematics, at the world tick, until Completed or TimedOut.
TrialResult run_trial(const ExperimentSpec& spec, int trial_index,
                      const RoadFollower& follower = {});

/// Run all trials (optionally across worker threads; assembly is in trial
/// order so parallelism never changes results).
ExperimentResult run_trials(const ExperimentSpec& spec,
                            const RoadFollower& follower = {});

/// run_trials plus report.json / summary.csv / trial_<i>.geojson in out_dir.
ExperimentResult run_experiment(const ExperimentSpec& spec, const std::string& out_dir);

struct ModeSummary {
    double mean_time_s = 0.0;
    double mean_energy_j = 0.0;
    double mean_waypoints_reached = 0.0;
    int total_skips = 0;
};

struct CompareResult {
    ModeSummary shortcut;
    ModeSummary road;
    std::vector<TrialResult> shortcut_trials;
    std::vector<TrialResult> road_trials;
};

/// Paired shortcut-vs-road comparison on matched per-trial seeds. Reports
/// only; assertions live in the test suites.
CompareResult compare_modes(const ExperimentSpec& base, const RoadFollower& follower);

void write_compare_report(const CompareResult& result, const ExperimentSpec& spec,
                          const std::string& out_dir);

/// Fig.-style wait-probability curve export: CSV (t, low, high) and an SVG
/// line plot, for the configured variant.
void emit_patience_curves(const PatienceParams& low, const PatienceParams& high,
                          double t_max_s, double step_s, const std::string& out_dir);

} // namespace pnav
