#include "pnav/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pnav {

using json = nlohmann::json;

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

// Canonical numeric rounding so identical runs serialize identically and
// aggregates recomputed from the file match exactly.
double round_to(double v, double unit) { return std::round(v / unit) * unit; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
    if (!os) throw std::runtime_error("write failed: " + path);
}

const char* event_name(MissionEventType t) {
    switch (t) {
        case MissionEventType::Arrived: return "arrived";
        case MissionEventType::Skipped: return "skipped";
        case MissionEventType::Completed: return "completed";
        case MissionEventType::TimedOut: return "timed_out";
    }
    return "?";
}

std::string wp_label(int index, const MissionPlan& plan) {
    if (index < 0 || index >= static_cast<int>(plan.waypoints.size())) return "-";
    return plan.waypoints[index].label;
}

const char* condition_name(Condition c) { return c == Condition::Low ? "low" : "high"; }
const char* mode_name(NavMode m) { return m == NavMode::Shortcut ? "shortcut" : "road"; }
const char* variant_name(PatienceVariant v) {
    return v == PatienceVariant::LiteralEq1 ? "literal" : "figure";
}

} // namespace

std::string event_line(const MissionEvent& ev, const MissionPlan& plan) {
    std::ostringstream os;
    os << fmt("%.1f", ev.time_s) << ' ' << event_name(ev.type) << ' '
       << wp_label(ev.from_index, plan) << ' ' << wp_label(ev.to_index, plan) << ' ';
    if (ev.type == MissionEventType::Arrived) os << fmt("%.2f", ev.distance_m);
    else os << "-";
    return os.str();
}

void write_report_json(const ExperimentResult& result, const std::string& path) {
    const auto& spec = result.spec;
    json root;
    root["config"] = {
        {"site", spec.site_name},
        {"condition", condition_name(spec.condition)},
        {"mode", mode_name(spec.mode)},
        {"variant", variant_name(spec.variant)},
        {"trials", spec.trials},
        {"seed", spec.master_seed},
        {"no_noise", spec.no_noise},
        {"arrival_radius_m", spec.plan.arrival_radius_m},
        {"decision_tick_s", spec.plan.decision_tick_s},
        {"robot_speed_mps", spec.world.robot_speed_mps},
        {"gps_sigma_m", spec.world.gps_sigma_m},
    };

    const auto& agg = result.aggregate;
    json jagg = {
        {"trials", agg.trials},
        {"total_skips", agg.total_skips},
        {"completion_rate", round_to(agg.completion_rate, 1e-6)},
        {"mean_completion_time_s", round_to(agg.mean_completion_time_s, 1e-3)},
        {"mean_waypoints_reached", round_to(agg.mean_waypoints_reached, 1e-6)},
        {"mean_energy_j", round_to(agg.mean_energy_j, 1e-3)},
    };
    jagg["mean_time_before_skip_s"] =
        agg.mean_time_before_skip_s
            ? json(round_to(*agg.mean_time_before_skip_s, 1e-3))
            : json(nullptr);
    root["aggregate"] = jagg;

    json jtrials = json::array();
    for (const auto& t : result.trials) {
        json jt = {
            {"index", t.index},
            {"seed", t.seed},
            {"completed", t.completed},
            {"waypoints_reached", t.waypoints_reached},
            {"total_time_s", round_to(t.total_time_s, 1e-3)},
            {"total_energy_j", round_to(t.total_energy_j, 1e-3)},
            {"trajectory", "trial_" + std::to_string(t.index) + ".geojson"},
        };
        json jskips = json::array();
        for (const auto& s : t.skips)
            jskips.push_back({{"from", s.from_index},
                              {"to", s.to_index},
                              {"elapsed_s", round_to(s.elapsed_s, 1e-3)},
                              {"time_s", round_to(s.time_s, 1e-3)}});
        jt["skips"] = jskips;
        json jevents = json::array();
        for (const auto& ev : t.events) jevents.push_back(event_line(ev, spec.plan));
        jt["events"] = jevents;
        jtrials.push_back(jt);
    }
    root["trials"] = jtrials;
    write_file(path, root.dump(2) + "\n");
}

void write_summary_csv(const ExperimentResult& result, const std::string& path) {
    std::ostringstream os;
    os << "trial,seed,completed,waypoints_reached,skips,mean_time_before_skip_s,"
          "total_time_s,total_energy_j\n";
    for (const auto& t : result.trials) {
        double skip_sum = 0.0;
        for (const auto& s : t.skips) skip_sum += s.elapsed_s;
        os << t.index << ',' << t.seed << ',' << (t.completed ? 1 : 0) << ','
           << t.waypoints_reached << ',' << t.skips.size() << ',';
        if (t.skips.empty()) os << "";
        else os << fmt("%.3f", skip_sum / static_cast<double>(t.skips.size()));
        os << ',' << fmt("%.3f", t.total_time_s) << ',' << fmt("%.3f", t.total_energy_j)
           << "\n";
    }
    write_file(path, os.str());
}

namespace {

json coord(const GeoPoint& p) {
    // lon,lat order; 1e-7 deg (~1 cm) keeps serialization canonical.
    return json::array({round_to(p.lon, 1e-7), round_to(p.lat, 1e-7)});
}

} // namespace

std::string trajectory_geojson(const TrialResult& trial, const ExperimentSpec& spec) {
    json features = json::array();

    json line;
    line["type"] = "Feature";
    json coords = json::array();
    json times = json::array(), onroad = json::array(), energy = json::array();
    for (const auto& p : trial.trajectory) {
        coords.push_back(coord(p.fix));
        times.push_back(round_to(p.time_s, 1e-3));
        onroad.push_back(p.on_road ? 1 : 0);
        energy.push_back(round_to(p.energy_j, 1e-3));
    }
    line["geometry"] = {{"type", "LineString"}, {"coordinates", coords}};
    line["properties"] = {{"kind", "fix_trace"},
                          {"times_s", times},
                          {"on_road", onroad},
                          {"energy_j", energy}};
    features.push_back(line);

    for (std::size_t i = 0; i < spec.plan.waypoints.size(); ++i) {
        const auto& wp = spec.plan.waypoints[i];
        json f;
        f["type"] = "Feature";
        f["geometry"] = {{"type", "Point"}, {"coordinates", coord(wp.point)}};
        f["properties"] = {{"kind", "waypoint"},
                           {"label", wp.label},
                           {"index", static_cast<int>(i)}};
        features.push_back(f);
    }

    const double dt = spec.world.dt_s;
    for (const auto& ev : trial.events) {
        if (ev.type != MissionEventType::Arrived && ev.type != MissionEventType::Skipped)
            continue;
        json f;
        f["type"] = "Feature";
        std::size_t tick = static_cast<std::size_t>(std::lround(ev.time_s / dt));
        if (tick >= trial.trajectory.size())
            tick = trial.trajectory.empty() ? 0 : trial.trajectory.size() - 1;
        const GeoPoint at = trial.trajectory.empty() ? GeoPoint{}
                                                     : trial.trajectory[tick].fix;
        f["geometry"] = {{"type", "Point"}, {"coordinates", coord(at)}};
        f["properties"] = {{"kind", event_name(ev.type)},
                           {"time_s", round_to(ev.time_s, 1e-3)},
                           {"from", ev.from_index},
                           {"to", ev.to_index}};
        features.push_back(f);
    }

    json root = {{"type", "FeatureCollection"}, {"features", features}};
    return root.dump(2) + "\n";
}

void write_trajectory_geojson(const TrialResult& trial, const ExperimentSpec& spec,
                              const std::string& path) {
    write_file(path, trajectory_geojson(trial, spec));
}

LoadedReport load_report_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open report: " + path);
    json root = json::parse(is);

    LoadedReport out;
    out.trials = root.at("trials").size();

    std::vector<TrialResult> trials;
    for (const auto& jt : root.at("trials")) {
        TrialResult t;
        t.index = jt.at("index").get<int>();
        t.completed = jt.at("completed").get<bool>();
        t.waypoints_reached = jt.at("waypoints_reached").get<int>();
        t.total_time_s = jt.at("total_time_s").get<double>();
        t.total_energy_j = jt.at("total_energy_j").get<double>();
        for (const auto& js : jt.at("skips")) {
            SkipRecord s;
            s.from_index = js.at("from").get<int>();
            s.to_index = js.at("to").get<int>();
            s.elapsed_s = js.at("elapsed_s").get<double>();
            s.time_s = js.at("time_s").get<double>();
            t.skips.push_back(s);
        }
        out.trajectory_files.push_back(jt.at("trajectory").get<std::string>());
        trials.push_back(std::move(t));
    }
    out.aggregate = compute_aggregate(trials);

    // Self-consistency: the stored aggregate must be recomputable from the
    // per-trial records.
    const auto& ja = root.at("aggregate");
    auto close = [](double a, double b) { return std::fabs(a - b) <= 2e-3; };
    if (ja.at("trials").get<int>() != out.aggregate.trials ||
        ja.at("total_skips").get<int>() != out.aggregate.total_skips ||
        !close(ja.at("completion_rate").get<double>(), out.aggregate.completion_rate) ||
        !close(ja.at("mean_completion_time_s").get<double>(),
               out.aggregate.mean_completion_time_s) ||
        !close(ja.at("mean_waypoints_reached").get<double>(),
               out.aggregate.mean_waypoints_reached) ||
        !close(ja.at("mean_energy_j").get<double>(), out.aggregate.mean_energy_j))
        throw std::runtime_error("report aggregate does not match per-trial records: " +
                                 path);
    const auto& jskip = ja.at("mean_time_before_skip_s");
    if (jskip.is_null() != !out.aggregate.mean_time_before_skip_s ||
        (!jskip.is_null() &&
         !close(jskip.get<double>(), *out.aggregate.mean_time_before_skip_s)))
        throw std::runtime_error("report skip-time aggregate mismatch: " + path);
    return out;
}

std::string reserialize_geojson(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open geojson: " + path);
    json root = json::parse(is);
    if (root.at("type") != "FeatureCollection")
        throw std::runtime_error("not a FeatureCollection: " + path);
    return root.dump(2) + "\n";
}

void write_compare_report(const CompareResult& result, const ExperimentSpec& spec,
                          const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    auto mode_json = [](const ModeSummary& s) {
        return json{{"mean_time_s", round_to(s.mean_time_s, 1e-3)},
                    {"mean_energy_j", round_to(s.mean_energy_j, 1e-3)},
                    {"mean_waypoints_reached", round_to(s.mean_waypoints_reached, 1e-6)},
                    {"total_skips", s.total_skips}};
    };
    json root;
    root["config"] = {{"site", spec.site_name},
                      {"condition", condition_name(spec.condition)},
                      {"trials", spec.trials},
                      {"seed", spec.master_seed},
                      {"follower", spec.checkpoint_path.empty() ? "oracle" : "checkpoint"}};
    root["shortcut"] = mode_json(result.shortcut);
    root["road"] = mode_json(result.road);

    json per_trial = json::array();
    for (std::size_t i = 0; i < result.shortcut_trials.size(); ++i) {
        const auto& s = result.shortcut_trials[i];
        const auto& r = result.road_trials[i];
        per_trial.push_back({{"trial", static_cast<int>(i)},
                             {"shortcut_time_s", round_to(s.total_time_s, 1e-3)},
                             {"road_time_s", round_to(r.total_time_s, 1e-3)},
                             {"shortcut_energy_j", round_to(s.total_energy_j, 1e-3)},
                             {"road_energy_j", round_to(r.total_energy_j, 1e-3)},
                             {"shortcut_reached", s.waypoints_reached},
                             {"road_reached", r.waypoints_reached}});
    }
    root["per_trial"] = per_trial;
    write_file((fs::path(out_dir) / "comparison.json").string(), root.dump(2) + "\n");
}

void write_learning_curve_csv(const std::vector<EpisodeStats>& curve,
                              const std::string& path) {
    std::ostringstream os;
    os << "episode,reward_sum,on_road_fraction,epsilon\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& e = curve[i];
        os << i << ',' << fmt("%.1f", e.reward_sum) << ','
           << fmt("%.4f", e.on_road_fraction) << ',' << fmt("%.4f", e.epsilon) << "\n";
    }
    write_file(path, os.str());
}

void write_wait_curve_csv(const WaitCurve& low, const WaitCurve& high,
                          const std::string& path) {
    if (low.samples.size() != high.samples.size())
        throw std::invalid_argument("wait curves must share their time grid");
    std::ostringstream os;
    os << "t,p_wait_low,p_wait_high\n";
    for (std::size_t i = 0; i < low.samples.size(); ++i) {
        os << fmt("%.3f", low.samples[i].first) << ','
           << fmt("%.9f", low.samples[i].second) << ','
           << fmt("%.9f", high.samples[i].second) << "\n";
    }
    write_file(path, os.str());
}

void write_wait_curve_svg(const WaitCurve& low, const WaitCurve& high,
                          const std::string& path) {
    constexpr int kW = 640, kH = 420;
    constexpr double kLeft = 60, kRight = 20, kTop = 20, kBottom = 50;
    const double t_max = low.samples.empty() ? 1.0 : low.samples.back().first;

    auto x_of = [&](double t) {
        return kLeft + (kW - kLeft - kRight) * (t / t_max);
    };
    auto y_of = [&](double p) {
        return kTop + (kH - kTop - kBottom) * (1.0 - p);
    };
    auto polyline = [&](const WaitCurve& c) {
        std::ostringstream pts;
        for (const auto& [t, p] : c.samples)
            pts << fmt("%.2f", x_of(t)) << ',' << fmt("%.2f", y_of(p)) << ' ';
        return pts.str();
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
       << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    os << "<line x1=\"" << kLeft << "\" y1=\"" << y_of(0) << "\" x2=\"" << kW - kRight
       << "\" y2=\"" << y_of(0) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << y_of(0) << "\" x2=\"" << kLeft
       << "\" y2=\"" << kTop << "\" stroke=\"black\"/>\n";
    for (double p = 0.0; p <= 1.0001; p += 0.25) {
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt("%.2f", y_of(p) + 4)
           << "\" font-size=\"12\" text-anchor=\"end\">" << fmt("%.2f", p)
           << "</text>\n";
    }
    for (double t = 0.0; t <= t_max + 1e-9; t += t_max / 6.0) {
        os << "<text x=\"" << fmt("%.2f", x_of(t)) << "\" y=\"" << kH - kBottom + 20
           << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt("%.0f", t)
           << "</text>\n";
    }
    os << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 12
       << "\" font-size=\"13\" text-anchor=\"middle\">elapsed search time (s)</text>\n";
    os << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\""
       << polyline(low) << "\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#2471a3\" stroke-width=\"2\" points=\""
       << polyline(high) << "\"/>\n";
    os << "<text x=\"" << kW - 190 << "\" y=\"40\" font-size=\"13\" fill=\"#c0392b\">"
       << "low serotonin (q=" << fmt("%.2f", low.params.prior_q) << ")</text>\n";
    os << "<text x=\"" << kW - 190 << "\" y=\"60\" font-size=\"13\" fill=\"#2471a3\">"
       << "high serotonin (q=" << fmt("%.2f", high.params.prior_q) << ")</text>\n";
    os << "</svg>\n";
    write_file(path, os.str());
}

} // namespace pnav
