#pragma once

#include <string>
#include <vector>

#include "pnav/mission.hpp"
#include "pnav/roadrl.hpp"
#include "pnav/world.hpp"

namespace pnav {

/// A bundled site: world profile plus its waypoint course and start pose.
/// Courses are representative desk-scale layouts (10 waypoints, 50-60 m
/// spacing); coordinates come from the site origin via the local projection.
struct Site {
    std::string name;
    WorldConfig world;
    MissionPlan plan; // patience defaults; condition fills prior_q
    Pose start;
};

/// "encinitas": flat park, clean GPS, rare multipath episodes.
/// "aldrich": sunken-bowl campus park - strong white noise, bias walk,
/// frequent multipath episodes, a winding path network, rough terrain off it.
Site make_site(const std::string& name);

std::vector<std::string> site_names();

/// Named training tracks. "scurve" is the bundled training course;
/// "straight" is a trivial baseline used in tests.
Track make_track(const std::string& name);

std::vector<std::string> track_names();

} // namespace pnav
