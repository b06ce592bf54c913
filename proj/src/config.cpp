#include "pnav/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pnav {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key");
        cfg.entries_[section.empty() ? key : section + "." + key].push_back(value);
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse(buf.str());
}

void Config::set(const std::string& dotted_key, const std::string& value) {
    entries_[dotted_key] = {value};
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end() || it->second.empty()) return std::nullopt;
    return it->second.back();
}

const std::vector<std::string>& Config::get_all(const std::string& key) const {
    static const std::vector<std::string> kEmpty;
    const auto it = entries_.find(key);
    return it == entries_.end() ? kEmpty : it->second;
}

std::string Config::get_string(const std::string& key, const std::string& def) const {
    return get(key).value_or(def);
}

double Config::get_double(const std::string& key, double def) const {
    const auto v = get(key);
    if (!v) return def;
    try {
        std::size_t pos = 0;
        const double d = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw std::invalid_argument("config key " + key + ": bad number '" + *v + "'");
    }
}

int Config::get_int(const std::string& key, int def) const {
    const double d = get_double(key, def);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw std::invalid_argument("config key " + key + ": expected integer");
    return i;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t def) const {
    const auto v = get(key);
    if (!v) return def;
    try {
        std::size_t pos = 0;
        const std::uint64_t u = std::stoull(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("");
        return u;
    } catch (...) {
        throw std::invalid_argument("config key " + key + ": bad unsigned '" + *v + "'");
    }
}

bool Config::get_bool(const std::string& key, bool def) const {
    const auto v = get(key);
    if (!v) return def;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw std::invalid_argument("config key " + key + ": bad boolean '" + *v + "'");
}

double prior_q_for(Condition c) { return c == Condition::Low ? 0.50 : 0.95; }

void ExperimentSpec::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (parallel < 1) throw std::invalid_argument("parallel must be >= 1");
    world.validate();
    plan.validate();
    if (mode == NavMode::Road && world.roads.empty())
        throw std::invalid_argument("road mode requires a road network covering the course");
}

ExperimentSpec build_spec(const Config& cfg) {
    ExperimentSpec spec;
    spec.site_name = cfg.get_string("experiment.site", "encinitas");
    Site site = make_site(spec.site_name);
    spec.world = site.world;
    spec.plan = site.plan;
    spec.start = site.start;

    const std::string cond = cfg.get_string("experiment.condition", "low");
    if (cond == "low") spec.condition = Condition::Low;
    else if (cond == "high") spec.condition = Condition::High;
    else throw std::invalid_argument("experiment.condition must be low|high");

    const std::string mode = cfg.get_string("experiment.mode", "shortcut");
    if (mode == "shortcut") spec.mode = NavMode::Shortcut;
    else if (mode == "road") spec.mode = NavMode::Road;
    else throw std::invalid_argument("experiment.mode must be shortcut|road");

    const std::string variant = cfg.get_string("experiment.variant", "figure");
    if (variant == "figure") spec.variant = PatienceVariant::FigureConsistent;
    else if (variant == "literal") spec.variant = PatienceVariant::LiteralEq1;
    else throw std::invalid_argument("experiment.variant must be figure|literal");

    spec.trials = cfg.get_int("experiment.trials", 1);
    spec.master_seed = cfg.get_u64("experiment.seed", 1);
    spec.no_noise = cfg.get_bool("experiment.no_noise", false);
    spec.parallel = cfg.get_int("experiment.parallel", 1);
    spec.checkpoint_path = cfg.get_string("experiment.checkpoint", "");
    spec.oracle_follower = spec.checkpoint_path.empty();

    // world overrides
    auto& w = spec.world;
    w.gps_sigma_m = cfg.get_double("world.gps_sigma_m", w.gps_sigma_m);
    w.gps_bias_walk_m_per_sqrt_s =
        cfg.get_double("world.gps_bias_walk", w.gps_bias_walk_m_per_sqrt_s);
    w.multipath.rate_per_s = cfg.get_double("world.multipath_rate", w.multipath.rate_per_s);
    w.multipath.mag_min_m = cfg.get_double("world.multipath_mag_min", w.multipath.mag_min_m);
    w.multipath.mag_max_m = cfg.get_double("world.multipath_mag_max", w.multipath.mag_max_m);
    w.multipath.dur_min_s = cfg.get_double("world.multipath_dur_min", w.multipath.dur_min_s);
    w.multipath.dur_max_s = cfg.get_double("world.multipath_dur_max", w.multipath.dur_max_s);
    w.compass_sigma_deg = cfg.get_double("world.compass_sigma_deg", w.compass_sigma_deg);
    w.declination_deg = cfg.get_double("world.declination_deg", w.declination_deg);
    w.energy_road_j_per_m = cfg.get_double("world.energy_road", w.energy_road_j_per_m);
    w.energy_offroad_j_per_m = cfg.get_double("world.energy_offroad", w.energy_offroad_j_per_m);
    w.robot_speed_mps = cfg.get_double("world.robot_speed", w.robot_speed_mps);
    w.offroad_speed_factor =
        cfg.get_double("world.offroad_speed_factor", w.offroad_speed_factor);
    w.turn_rate_deg_per_s = cfg.get_double("world.turn_rate", w.turn_rate_deg_per_s);
    w.dt_s = cfg.get_double("world.dt", w.dt_s);
    w.roads.width_m = cfg.get_double("world.road_width", w.roads.width_m);

    // mission + patience overrides
    auto& plan = spec.plan;
    plan.arrival_radius_m = cfg.get_double("mission.arrival_radius_m", plan.arrival_radius_m);
    plan.decision_tick_s = cfg.get_double("mission.decision_tick_s", plan.decision_tick_s);
    plan.max_mission_time_s =
        cfg.get_double("mission.max_mission_time_s", plan.max_mission_time_s);
    plan.patience.beta = cfg.get_double("patience.beta", plan.patience.beta);
    plan.patience.mu_s = cfg.get_double("patience.mu_s", plan.patience.mu_s);
    plan.patience.sigma_s = cfg.get_double("patience.sigma_s", plan.patience.sigma_s);
    plan.patience.prior_q = prior_q_for(spec.condition);
    plan.patience.prior_q = cfg.get_double("patience.prior_q", plan.patience.prior_q);
    plan.patience.variant = spec.variant;

    // custom course: "waypoint = LABEL lat lon", "start = lat lon heading" (ENU
    // frame of the site origin is used when keys are "start_enu"/"waypoint_enu")
    const auto& wps = cfg.get_all("course.waypoint");
    if (!wps.empty()) {
        plan.waypoints.clear();
        for (const auto& line : wps) {
            std::istringstream ls(line);
            Waypoint wp;
            if (!(ls >> wp.label >> wp.point.lat >> wp.point.lon))
                throw std::invalid_argument("course.waypoint: expected 'LABEL lat lon'");
            plan.waypoints.push_back(std::move(wp));
        }
    }
    if (const auto s = cfg.get("course.start")) {
        std::istringstream ls(*s);
        double lat, lon, heading;
        if (!(ls >> lat >> lon >> heading))
            throw std::invalid_argument("course.start: expected 'lat lon heading'");
        const auto enu = enu_project(spec.world.origin, {lat, lon});
        spec.start = {enu.east_m, enu.north_m, normalize_compass(heading)};
    }

    if (spec.no_noise) {
        w.gps_sigma_m = 0.0;
        w.gps_bias_walk_m_per_sqrt_s = 0.0;
        w.compass_sigma_deg = 0.0;
        w.multipath.rate_per_s = 0.0;
    }

    spec.validate();
    return spec;
}

} // namespace pnav
