// pnav command-line front end. Talks to the simulation core exclusively
// through the C API in pnav.h.

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "pnav.h"

namespace {

struct ConfigDeleter {
    void operator()(pnav_config* c) const { pnav_config_free(c); }
};
using ConfigPtr = std::unique_ptr<pnav_config, ConfigDeleter>;

// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.
int rc_of(pnav_status st) {
    if (st == PNAV_OK) return 0;
    std::fprintf(stderr, "error: %s\n", pnav_last_error());
    return st == PNAV_ERR_INVALID_ARGUMENT ? 1 : 2;
}

struct CommonOpts {
    std::string config_file;
    std::string site;
    std::string condition;
    std::string variant;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int trials = 0;
    int parallel = 0;
    bool no_noise = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_file, "experiment config file");
    cmd->add_option("--site", opts.site, "site profile (encinitas|aldrich)");
    cmd->add_option("--condition", opts.condition, "serotonin condition (low|high)");
    cmd->add_option("--variant", opts.variant, "wait-curve variant (figure|literal)");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--trials", opts.trials, "number of trials");
    cmd->add_option("--parallel", opts.parallel, "worker threads");
    cmd->add_flag("--no-noise", opts.no_noise, "disable all sensor noise");
}

ConfigPtr build_config(const CommonOpts& opts, int& rc) {
    ConfigPtr cfg(opts.config_file.empty() ? pnav_config_create()
                                           : pnav_config_load(opts.config_file.c_str()));
    if (!cfg) {
        std::fprintf(stderr, "error: %s\n", pnav_last_error());
        rc = 1;
        return nullptr;
    }
    auto set = [&](const char* key, const std::string& value) {
        if (rc == 0 && !value.empty())
            rc = rc_of(pnav_config_set(cfg.get(), key, value.c_str()));
    };
    set("experiment.site", opts.site);
    set("experiment.condition", opts.condition);
    set("experiment.variant", opts.variant);
    if (opts.seed != 0) set("experiment.seed", std::to_string(opts.seed));
    if (opts.trials != 0) set("experiment.trials", std::to_string(opts.trials));
    if (opts.parallel != 0) set("experiment.parallel", std::to_string(opts.parallel));
    if (opts.no_noise) set("experiment.no_noise", "true");
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"patience-modulated waypoint navigation simulator"};
    app.require_subcommand(1);

    // simulate
    CommonOpts sim_opts;
    std::string sim_mode, sim_checkpoint;
    auto* sim = app.add_subcommand("simulate", "run a waypoint navigation experiment");
    add_common(sim, sim_opts);
    sim->add_option("--mode", sim_mode, "navigation mode (shortcut|road)");
    sim->add_option("--checkpoint", sim_checkpoint, "policy checkpoint for road mode");

    // curves
    CommonOpts curve_opts;
    double t_max = 120.0, t_step = 1.0;
    auto* curves = app.add_subcommand("curves", "emit the wait-probability curves");
    add_common(curves, curve_opts);
    curves->add_option("--t-max", t_max, "last sample time (s)");
    curves->add_option("--step", t_step, "sample step (s)");

    // train-road
    std::string train_track = "scurve", train_out = "out";
    int train_episodes = 500;
    std::uint64_t train_seed = 7;
    auto* train = app.add_subcommand("train-road", "train the road-following policy");
    train->add_option("--track", train_track, "track name (scurve|straight)");
    train->add_option("--episodes", train_episodes, "training episodes");
    train->add_option("--seed", train_seed, "training seed");
    train->add_option("--out", train_out, "output directory");

    // eval-road
    std::string eval_track = "scurve", eval_checkpoint;
    bool eval_oracle = false;
    int eval_episodes = 20;
    std::uint64_t eval_seed = 7;
    auto* eval = app.add_subcommand("eval-road", "evaluate a road-following policy");
    eval->add_option("--track", eval_track, "track name");
    eval->add_option("--checkpoint", eval_checkpoint, "checkpoint file");
    eval->add_flag("--oracle", eval_oracle, "evaluate the mask-centroid follower");
    eval->add_option("--episodes", eval_episodes, "evaluation episodes");
    eval->add_option("--seed", eval_seed, "evaluation seed");

    // compare-modes
    CommonOpts cmp_opts;
    std::string cmp_checkpoint;
    bool cmp_oracle = false;
    auto* cmp = app.add_subcommand("compare-modes",
                                   "paired shortcut vs road comparison");
    add_common(cmp, cmp_opts);
    cmp->add_option("--checkpoint", cmp_checkpoint, "road-mode policy checkpoint");
    cmp->add_flag("--oracle", cmp_oracle, "use the mask-centroid follower");

    // export
    std::string exp_report, exp_out = "trajectory.geojson";
    int exp_trial = 0;
    auto* exp = app.add_subcommand("export", "re-export a trial trajectory");
    exp->add_option("--report", exp_report, "report.json path")->required();
    exp->add_option("--trial", exp_trial, "trial index");
    exp->add_option("--out", exp_out, "output GeoJSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    int rc = 0;
    if (sim->parsed()) {
        ConfigPtr cfg = build_config(sim_opts, rc);
        if (!cfg || rc != 0) return rc ? rc : 1;
        if (!sim_mode.empty())
            rc = rc_of(pnav_config_set(cfg.get(), "experiment.mode", sim_mode.c_str()));
        if (rc == 0 && !sim_checkpoint.empty())
            rc = rc_of(pnav_config_set(cfg.get(), "experiment.checkpoint",
                                       sim_checkpoint.c_str()));
        if (rc != 0) return rc;
        pnav_experiment_summary s{};
        rc = rc_of(pnav_run_experiment(cfg.get(), sim_opts.out_dir.c_str(), &s));
        if (rc == 0) {
            std::printf("trials %d  skips %d  completion %.0f%%  mean time %.1f s  "
                        "mean energy %.0f J\n",
                        s.trials, s.total_skips, 100.0 * s.completion_rate,
                        s.mean_completion_time_s, s.mean_energy_j);
            if (!std::isnan(s.mean_time_before_skip_s))
                std::printf("mean time before skip %.1f s\n", s.mean_time_before_skip_s);
            std::printf("report written to %s\n", sim_opts.out_dir.c_str());
        }
        return rc;
    }

    if (curves->parsed()) {
        ConfigPtr cfg = build_config(curve_opts, rc);
        if (!cfg || rc != 0) return rc ? rc : 1;
        rc = rc_of(pnav_emit_patience_curves(cfg.get(), t_max, t_step,
                                             curve_opts.out_dir.c_str()));
        if (rc == 0)
            std::printf("curves.csv and curves.svg written to %s\n",
                        curve_opts.out_dir.c_str());
        return rc;
    }

    if (train->parsed()) {
        pnav_train_summary s{};
        rc = rc_of(pnav_train_road(train_track.c_str(), train_episodes, train_seed,
                                   train_out.c_str(), &s));
        if (rc == 0)
            std::printf("trained %d episodes  final-10 on-road %.3f\n"
                        "checkpoint.bin and learning_curve.csv written to %s\n",
                        s.episodes, s.final10_mean_on_road, train_out.c_str());
        return rc;
    }

    if (eval->parsed()) {
        if (eval_checkpoint.empty() && !eval_oracle) {
            std::fprintf(stderr, "error: eval-road needs --checkpoint or --oracle\n");
            return 1;
        }
        pnav_eval_summary s{};
        rc = rc_of(pnav_eval_road(eval_track.c_str(),
                                  eval_oracle ? nullptr : eval_checkpoint.c_str(),
                                  eval_episodes, eval_seed, &s));
        if (rc == 0)
            std::printf("on-road fraction %.3f  mean steps %.1f  mean reward %.1f\n",
                        s.mean_on_road_fraction, s.mean_episode_steps, s.mean_reward);
        return rc;
    }

    if (cmp->parsed()) {
        if (cmp_checkpoint.empty() && !cmp_oracle) {
            std::fprintf(stderr, "error: compare-modes needs --checkpoint or --oracle\n");
            return 1;
        }
        ConfigPtr cfg = build_config(cmp_opts, rc);
        if (!cfg || rc != 0) return rc ? rc : 1;
        pnav_compare_summary s{};
        rc = rc_of(pnav_compare_modes(cfg.get(),
                                      cmp_oracle ? nullptr : cmp_checkpoint.c_str(),
                                      cmp_opts.out_dir.c_str(), &s));
        if (rc == 0) {
            std::printf("shortcut: time %.1f s  energy %.0f J  reached %.2f\n",
                        s.shortcut.mean_time_s, s.shortcut.mean_energy_j,
                        s.shortcut.mean_waypoints_reached);
            std::printf("road:     time %.1f s  energy %.0f J  reached %.2f\n",
                        s.road.mean_time_s, s.road.mean_energy_j,
                        s.road.mean_waypoints_reached);
            std::printf("comparison.json written to %s\n", cmp_opts.out_dir.c_str());
        }
        return rc;
    }

    if (exp->parsed()) {
        rc = rc_of(pnav_export_trajectory(exp_report.c_str(), exp_trial,
                                          exp_out.c_str()));
        if (rc == 0) std::printf("trajectory written to %s\n", exp_out.c_str());
        return rc;
    }

    return 1;
}
