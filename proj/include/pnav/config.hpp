#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pnav/sites.hpp"

namespace pnav {

/// Key/value config with nested sections. Keys are stored as
/// "section.key"; repeated keys (e.g. course.waypoint) accumulate in order.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    void set(const std::string& dotted_key, const std::string& value);

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    const std::vector<std::string>& get_all(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
    bool get_bool(const std::string& key, bool def) const;

    const std::map<std::string, std::vector<std::string>>& entries() const {
        return entries_;
    }

private:
    std::map<std::string, std::vector<std::string>> entries_;
};

enum class Condition { Low, High };
enum class NavMode { Shortcut, Road };

/// Everything one experiment run needs; built from a site profile plus
/// config-file and command-line overrides. One spec fully determines a run.
struct ExperimentSpec {
    std::string site_name;
    WorldConfig world;
    MissionPlan plan;
    Pose start;
    Condition condition = Condition::Low;
    NavMode mode = NavMode::Shortcut;
    PatienceVariant variant = PatienceVariant::FigureConsistent;
    int trials = 1;
    std::uint64_t master_seed = 1;
    bool no_noise = false;
    int parallel = 1;
    std::string checkpoint_path; // road mode: empty selects the oracle follower
    bool oracle_follower = true;

    double prior_q() const { return condition == Condition::Low ? 0.50 : 0.95; }

    void validate() const;
};

/// Resolve a Config into a runnable spec. The "experiment.site" profile
/// provides the defaults; [world]/[mission]/[patience]/[course] entries
/// override it.
ExperimentSpec build_spec(const Config& cfg);

double prior_q_for(Condition c);

} // namespace pnav
