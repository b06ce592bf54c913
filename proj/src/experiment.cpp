#include "pnav/experiment.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include "pnav/report.hpp"
#include "pnav/roadrl.hpp"

namespace pnav {

namespace {

// Road-mode executor tuning: how the follower is supervised around the
// waypoint logic. The follower itself only sees the mask.
constexpr double kControlPeriodS = 0.4;
constexpr double kBehindHysteresisM = 30.0;
constexpr double kBehindHysteresisS = 8.0;

struct RoadModeState {
    double direction = 1.0; // +1 along the polyline, -1 against it
    double behind_since_s = -1.0;
    SteeringCommand held;
    double next_control_s = 0.0;
    int target_index = -1;
    double target_arc_m = 0.0;
};

ActionId follower_action(const RoadFollower& follower, const Observation& obs) {
    if (follower.net) return greedy_action(*follower.net, obs);
    return mask_centroid_action(obs);
}

SteeringCommand steer_toward(const Vec2& goal, double from_e, double from_n,
                             double heading_est_deg) {
    const double bearing =
        normalize_compass(std::atan2(goal.east_m - from_e, goal.north_m - from_n) *
                          180.0 / M_PI);
    return steering_command(bearing, heading_est_deg);
}

} // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
    return derive_seed(master_seed, 0x7472696100ULL + static_cast<std::uint64_t>(trial_index));
}

Aggregate compute_aggregate(const std::vector<TrialResult>& trials) {
    Aggregate agg;
    agg.trials = static_cast<int>(trials.size());
    double skip_time_sum = 0.0;
    int completed = 0;
    double completion_time_sum = 0.0;
    for (const auto& t : trials) {
        agg.total_skips += static_cast<int>(t.skips.size());
        for (const auto& s : t.skips) skip_time_sum += s.elapsed_s;
        agg.mean_waypoints_reached += t.waypoints_reached;
        agg.mean_energy_j += t.total_energy_j;
        if (t.completed) {
            ++completed;
            completion_time_sum += t.total_time_s;
        }
    }
    if (agg.trials > 0) {
        agg.mean_waypoints_reached /= agg.trials;
        agg.mean_energy_j /= agg.trials;
        agg.completion_rate = static_cast<double>(completed) / agg.trials;
    }
    if (agg.total_skips > 0)
        agg.mean_time_before_skip_s = skip_time_sum / agg.total_skips;
    if (completed > 0) agg.mean_completion_time_s = completion_time_sum / completed;
    return agg;
}

TrialResult run_trial(const ExperimentSpec& spec, int trial_index,
                      const RoadFollower& follower) {
    spec.validate();
    const WorldConfig& world = spec.world;
    MissionPlan plan = spec.plan;
    plan.patience.prior_q = spec.plan.patience.prior_q;

    TrialResult result;
    result.index = trial_index;
    result.seed = trial_seed(spec.master_seed, trial_index);

    SensorRig rig(world, result.seed, plan.max_mission_time_s + 60.0);
    Rng patience_stream = make_stream(result.seed, StreamId::Patience);

    MissionState state = make_mission_state(plan);
    Pose pose = spec.start;
    // Target waypoints in the local frame, for steering and road projections.
    std::vector<Vec2> targets_enu;
    targets_enu.reserve(plan.waypoints.size());
    for (const auto& wp : plan.waypoints) {
        const auto enu = enu_project(world.origin, wp.point);
        targets_enu.push_back({enu.east_m, enu.north_m});
    }

    RoadModeState road_state;
    double energy = 0.0;
    const double dt = world.dt_s;
    result.trajectory.reserve(static_cast<std::size_t>(plan.max_mission_time_s / dt) + 4);

    while (!state.frozen) {
        const double clock = state.clock_s;
        const SensorFrame frame = rig.sample(pose, clock);

        const auto step = mission_step(state, frame.gps_fix, plan, patience_stream, dt);
        result.trajectory.push_back({clock, frame.gps_fix, frame.on_road, energy});
        if (step.terminal) break;

        const int target = state.current_index;
        const Vec2 target_enu = targets_enu[target];
        const auto fix_enu = enu_project(world.origin, frame.gps_fix);
        const double heading_est =
            true_heading(frame.compass_magnetic_deg, world.declination_deg);

        SteeringCommand steer;
        if (spec.mode == NavMode::Shortcut) {
            try {
                const double bearing = initial_bearing(frame.gps_fix,
                                                       plan.waypoints[target].point);
                steer = steering_command(bearing, heading_est);
            } catch (const DegenerateBearingError&) {
                steer = {SteerDirection::Straight, 0.0};
            }
        } else {
            // Road mode: the follower acts on the mask at the control period;
            // the executor supervises direction along the path and recovery.
            if (road_state.target_index != target) {
                road_state.target_index = target;
                road_state.target_arc_m =
                    project_onto_road(target_enu.east_m, target_enu.north_m, world.roads)
                        .arc_m;
            }
            if (clock >= road_state.next_control_s - 1e-9) {
                road_state.next_control_s = clock + kControlPeriodS;
                const auto true_proj =
                    project_onto_road(pose.east_m, pose.north_m, world.roads);
                const auto fix_proj =
                    project_onto_road(fix_enu.east_m, fix_enu.north_m, world.roads);

                const double want =
                    road_state.target_arc_m >= fix_proj.arc_m ? 1.0 : -1.0;
                if (want != road_state.direction) {
                    if (std::fabs(road_state.target_arc_m - fix_proj.arc_m) >
                        kBehindHysteresisM) {
                        if (road_state.behind_since_s < 0.0)
                            road_state.behind_since_s = clock;
                        else if (clock - road_state.behind_since_s > kBehindHysteresisS) {
                            road_state.direction = want;
                            road_state.behind_since_s = -1.0;
                        }
                    } else {
                        road_state.behind_since_s = -1.0;
                    }
                } else {
                    road_state.behind_since_s = -1.0;
                }

                if (true_proj.distance_m > world.roads.width_m / 2.0) {
                    // Off the path: head back to it.
                    road_state.held =
                        steer_toward(true_proj.point, pose.east_m, pose.north_m,
                                     heading_est);
                } else if (road_state.direction < 0.0) {
                    // Target behind: track the path against its direction.
                    const double des_e = -true_proj.tangent.east_m +
                                         0.5 * (true_proj.point.east_m - pose.east_m);
                    const double des_n = -true_proj.tangent.north_m +
                                         0.5 * (true_proj.point.north_m - pose.north_m);
                    const double desired =
                        normalize_compass(std::atan2(des_e, des_n) * 180.0 / M_PI);
                    road_state.held = steering_command(desired, heading_est);
                } else {
                    const Observation obs = render_observation(pose, world.roads);
                    const ActionId a = follower_action(follower, obs);
                    const double rate = kActionRateDps[static_cast<int>(a)];
                    road_state.held.magnitude_deg = std::fabs(rate) * dt;
                    road_state.held.direction = rate > 0.0   ? SteerDirection::Right
                                                : rate < 0.0 ? SteerDirection::Left
                                                             : SteerDirection::Straight;
                }
            }
            steer = road_state.held;
        }

        const bool on_r = !world.roads.empty() && on_road(pose, world);
        const double speed =
            world.robot_speed_mps * (on_r ? 1.0 : world.offroad_speed_factor);
        const Pose next = kinematics_step(pose, steer, speed,
                                          world.turn_rate_deg_per_s, dt);
        energy += accrue_energy(pose, next, world);
        pose = next;
    }

    result.events = state.events;
    for (const auto& ev : state.events) {
        if (ev.type == MissionEventType::Arrived) ++result.waypoints_reached;
        if (ev.type == MissionEventType::Skipped)
            result.skips.push_back({ev.from_index, ev.to_index, ev.elapsed_search_s,
                                    ev.time_s});
        if (ev.type == MissionEventType::Completed) result.completed = true;
    }
    result.total_time_s = state.events.empty() ? state.clock_s : state.events.back().time_s;
    result.total_energy_j = energy;
    return result;
}

ExperimentResult run_trials(const ExperimentSpec& spec, const RoadFollower& follower) {
    spec.validate();
    ExperimentResult result;
    result.spec = spec;
    result.trials.resize(spec.trials);

    const int workers = std::min(spec.parallel, spec.trials);
    if (workers <= 1) {
        for (int i = 0; i < spec.trials; ++i)
            result.trials[i] = run_trial(spec, i, follower);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const int i = next.fetch_add(1);
                    if (i >= spec.trials) break;
                    result.trials[i] = run_trial(spec, i, follower);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    result.aggregate = compute_aggregate(result.trials);
    return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
    RoadFollower follower;
    Checkpoint ck;
    if (spec.mode == NavMode::Road && !spec.checkpoint_path.empty()) {
        ck = load_checkpoint(spec.checkpoint_path);
        follower.net = &ck.net;
    }
    ExperimentResult result = run_trials(spec, follower);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    write_report_json(result, (dir / "report.json").string());
    write_summary_csv(result, (dir / "summary.csv").string());
    for (const auto& trial : result.trials)
        write_trajectory_geojson(trial, spec,
                                 (dir / ("trial_" + std::to_string(trial.index) +
                                         ".geojson")).string());
    return result;
}

namespace {

ModeSummary summarize(const std::vector<TrialResult>& trials) {
    ModeSummary s;
    for (const auto& t : trials) {
        s.mean_time_s += t.total_time_s;
        s.mean_energy_j += t.total_energy_j;
        s.mean_waypoints_reached += t.waypoints_reached;
        s.total_skips += static_cast<int>(t.skips.size());
    }
    if (!trials.empty()) {
        const double n = static_cast<double>(trials.size());
        s.mean_time_s /= n;
        s.mean_energy_j /= n;
        s.mean_waypoints_reached /= n;
    }
    return s;
}

} // namespace

CompareResult compare_modes(const ExperimentSpec& base, const RoadFollower& follower) {
    ExperimentSpec shortcut_spec = base;
    shortcut_spec.mode = NavMode::Shortcut;
    ExperimentSpec road_spec = base;
    road_spec.mode = NavMode::Road;
    road_spec.validate();

    CompareResult out;
    out.shortcut_trials = run_trials(shortcut_spec, {}).trials;
    out.road_trials = run_trials(road_spec, follower).trials;
    out.shortcut = summarize(out.shortcut_trials);
    out.road = summarize(out.road_trials);
    return out;
}

void emit_patience_curves(const PatienceParams& low, const PatienceParams& high,
                          double t_max_s, double step_s, const std::string& out_dir) {
    const WaitCurve low_curve = sample_wait_curve(low, t_max_s, step_s);
    const WaitCurve high_curve = sample_wait_curve(high, t_max_s, step_s);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    write_wait_curve_csv(low_curve, high_curve, (dir / "curves.csv").string());
    write_wait_curve_svg(low_curve, high_curve, (dir / "curves.svg").string());
}

} // namespace pnav
