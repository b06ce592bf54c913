#include "pnav.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "pnav/config.hpp"
#include "pnav/experiment.hpp"
#include "pnav/report.hpp"
#include "pnav/sites.hpp"

namespace {

thread_local std::string t_last_error;

void set_error(const char* what) { t_last_error = what ? what : "unknown error"; }

template <typename Fn>
pnav_status guarded(Fn&& fn) {
    try {
        fn();
        t_last_error.clear();
        return PNAV_OK;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return PNAV_ERR_INVALID_ARGUMENT;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return PNAV_ERR_INVALID_ARGUMENT;
    } catch (const std::logic_error& e) {
        set_error(e.what());
        return PNAV_ERR_INVALID_ARGUMENT;
    } catch (const std::runtime_error& e) {
        set_error(e.what());
        return PNAV_ERR_IO;
    } catch (const std::exception& e) {
        set_error(e.what());
        return PNAV_ERR_RUNTIME;
    } catch (...) {
        set_error("unknown error");
        return PNAV_ERR_RUNTIME;
    }
}

pnav::PatienceParams to_params(const pnav_patience_params* p) {
    if (!p) throw std::invalid_argument("null patience params");
    pnav::PatienceParams out;
    out.beta = p->beta;
    out.mu_s = p->mu_s;
    out.sigma_s = p->sigma_s;
    out.prior_q = p->prior_q;
    out.variant = p->literal ? pnav::PatienceVariant::LiteralEq1
                             : pnav::PatienceVariant::FigureConsistent;
    return out;
}

} // namespace

struct pnav_config {
    pnav::Config cfg;
};

extern "C" {

const char* pnav_version(void) { return "0.1.0"; }

const char* pnav_last_error(void) { return t_last_error.c_str(); }

pnav_config* pnav_config_create(void) { return new pnav_config{}; }

pnav_config* pnav_config_load(const char* path) {
    pnav_config* out = nullptr;
    const pnav_status st = guarded([&] {
        if (!path) throw std::invalid_argument("null config path");
        out = new pnav_config{pnav::Config::load(path)};
    });
    return st == PNAV_OK ? out : nullptr;
}

pnav_config* pnav_config_parse(const char* text) {
    pnav_config* out = nullptr;
    const pnav_status st = guarded([&] {
        if (!text) throw std::invalid_argument("null config text");
        out = new pnav_config{pnav::Config::parse(text)};
    });
    return st == PNAV_OK ? out : nullptr;
}

void pnav_config_free(pnav_config* cfg) { delete cfg; }

pnav_status pnav_config_set(pnav_config* cfg, const char* key, const char* value) {
    return guarded([&] {
        if (!cfg || !key || !value) throw std::invalid_argument("null argument");
        cfg->cfg.set(key, value);
    });
}

pnav_status pnav_run_experiment(const pnav_config* cfg, const char* out_dir,
                                pnav_experiment_summary* summary) {
    return guarded([&] {
        if (!cfg || !out_dir) throw std::invalid_argument("null argument");
        const pnav::ExperimentSpec spec = pnav::build_spec(cfg->cfg);
        const pnav::ExperimentResult result = pnav::run_experiment(spec, out_dir);
        if (summary) {
            const auto& a = result.aggregate;
            summary->trials = a.trials;
            summary->total_skips = a.total_skips;
            summary->mean_time_before_skip_s =
                a.mean_time_before_skip_s ? *a.mean_time_before_skip_s
                                          : std::nan("");
            summary->mean_completion_time_s = a.mean_completion_time_s;
            summary->completion_rate = a.completion_rate;
            summary->mean_waypoints_reached = a.mean_waypoints_reached;
            summary->mean_energy_j = a.mean_energy_j;
        }
    });
}

pnav_status pnav_compare_modes(const pnav_config* cfg, const char* checkpoint_path,
                               const char* out_dir, pnav_compare_summary* summary) {
    return guarded([&] {
        if (!cfg) throw std::invalid_argument("null config");
        pnav::ExperimentSpec spec = pnav::build_spec(cfg->cfg);
        spec.checkpoint_path = checkpoint_path ? checkpoint_path : "";
        spec.oracle_follower = spec.checkpoint_path.empty();

        pnav::RoadFollower follower;
        pnav::Checkpoint ck;
        if (!spec.checkpoint_path.empty()) {
            ck = pnav::load_checkpoint(spec.checkpoint_path);
            follower.net = &ck.net;
        }
        const pnav::CompareResult result = pnav::compare_modes(spec, follower);
        if (out_dir) pnav::write_compare_report(result, spec, out_dir);
        if (summary) {
            auto fill = [](pnav_mode_summary* dst, const pnav::ModeSummary& src) {
                dst->mean_time_s = src.mean_time_s;
                dst->mean_energy_j = src.mean_energy_j;
                dst->mean_waypoints_reached = src.mean_waypoints_reached;
                dst->total_skips = src.total_skips;
            };
            fill(&summary->shortcut, result.shortcut);
            fill(&summary->road, result.road);
        }
    });
}

pnav_status pnav_emit_patience_curves(const pnav_config* cfg, double t_max_s,
                                      double step_s, const char* out_dir) {
    return guarded([&] {
        if (!cfg || !out_dir) throw std::invalid_argument("null argument");
        const pnav::ExperimentSpec spec = pnav::build_spec(cfg->cfg);
        pnav::PatienceParams low = spec.plan.patience;
        low.prior_q = pnav::prior_q_for(pnav::Condition::Low);
        pnav::PatienceParams high = spec.plan.patience;
        high.prior_q = pnav::prior_q_for(pnav::Condition::High);
        pnav::emit_patience_curves(low, high, t_max_s, step_s, out_dir);
    });
}

pnav_status pnav_export_trajectory(const char* report_path, int trial_index,
                                   const char* out_path) {
    return guarded([&] {
        if (!report_path || !out_path) throw std::invalid_argument("null argument");
        const pnav::LoadedReport report = pnav::load_report_json(report_path);
        if (trial_index < 0 || trial_index >= report.trials)
            throw std::invalid_argument("trial index out of range");
        const auto dir = std::filesystem::path(report_path).parent_path();
        const auto src = dir / report.trajectory_files[trial_index];
        const std::string body = pnav::reserialize_geojson(src.string());
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw std::runtime_error(std::string("cannot open: ") + out_path);
        os << body;
        if (!os) throw std::runtime_error(std::string("write failed: ") + out_path);
    });
}

pnav_status pnav_train_road(const char* track_name, int episodes, uint64_t seed,
                            const char* out_dir, pnav_train_summary* summary) {
    return guarded([&] {
        if (!track_name || !out_dir) throw std::invalid_argument("null argument");
        if (episodes < 0) throw std::invalid_argument("episodes must be >= 0");
        const pnav::Track track = pnav::make_track(track_name);
        pnav::AgentConfig agent;
        const pnav::TrainResult result = pnav::train_road(track, agent, episodes, seed);

        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        pnav::write_learning_curve_csv(result.curve, (dir / "learning_curve.csv").string());
        pnav::save_checkpoint(result.net, result.opt, (dir / "checkpoint.bin").string());

        if (summary) {
            summary->episodes = static_cast<int>(result.curve.size());
            double mean = 0.0;
            const int n = static_cast<int>(std::min<std::size_t>(10, result.curve.size()));
            for (int i = 0; i < n; ++i)
                mean += result.curve[result.curve.size() - 1 - i].on_road_fraction;
            summary->final10_mean_on_road = n > 0 ? mean / n : 0.0;
        }
    });
}

pnav_status pnav_eval_road(const char* track_name, const char* checkpoint_path,
                           int episodes, uint64_t seed, pnav_eval_summary* summary) {
    return guarded([&] {
        if (!track_name || !summary) throw std::invalid_argument("null argument");
        const pnav::Track track = pnav::make_track(track_name);
        pnav::AgentConfig agent;
        pnav::EvalResult r;
        if (checkpoint_path) {
            const pnav::Checkpoint ck = pnav::load_checkpoint(checkpoint_path);
            r = pnav::eval_road(ck.net, track, agent, episodes, seed);
        } else {
            r = pnav::eval_road_oracle(track, agent, episodes, seed);
        }
        summary->mean_on_road_fraction = r.mean_on_road_fraction;
        summary->mean_episode_steps = r.mean_episode_steps;
        summary->mean_reward = r.mean_reward;
    });
}

void pnav_patience_defaults(pnav_patience_params* params) {
    if (!params) return;
    const pnav::PatienceParams d;
    params->beta = d.beta;
    params->mu_s = d.mu_s;
    params->sigma_s = d.sigma_s;
    params->prior_q = d.prior_q;
    params->literal = 0;
}

pnav_status pnav_p_wait(double t_s, const pnav_patience_params* params, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = pnav::p_wait(t_s, to_params(params));
    });
}

pnav_status pnav_normal_cdf(double x, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = pnav::normal_cdf(x);
    });
}

pnav_status pnav_skip_time_stats(const pnav_patience_params* params, double tick_s,
                                 double horizon_s, double* mean_s, double* stddev_s,
                                 double* skip_probability) {
    return guarded([&] {
        const auto dist = pnav::skip_time_distribution(to_params(params), tick_s,
                                                       horizon_s);
        if (mean_s) *mean_s = dist.mean_skip_time_s;
        if (stddev_s) *stddev_s = dist.stddev_skip_time_s;
        if (skip_probability) *skip_probability = dist.skip_probability;
    });
}

pnav_status pnav_haversine_m(double lat1, double lon1, double lat2, double lon2,
                             double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = pnav::haversine_distance({lat1, lon1}, {lat2, lon2});
    });
}

pnav_status pnav_initial_bearing_deg(double lat1, double lon1, double lat2,
                                     double lon2, double* out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        *out = pnav::initial_bearing({lat1, lon1}, {lat2, lon2});
    });
}

} // extern "C"
