#pragma once

#include <string>
#include <vector>

#include "pnav/geo.hpp"
#include "pnav/patience.hpp"
#include "pnav/rng.hpp"

namespace pnav {

struct Waypoint {
    std::string label;
    GeoPoint point;
};

struct MissionPlan {
    std::vector<Waypoint> waypoints;
    double arrival_radius_m = 20.0;
    PatienceParams patience;
    double decision_tick_s = 1.0;
    double max_mission_time_s = 1800.0;

    void validate() const; // N >= 2, radius > 0, params valid
    int final_index() const { return static_cast<int>(waypoints.size()) - 1; }
};

enum class MissionEventType { Arrived, Skipped, Completed, TimedOut };

struct MissionEvent {
    double time_s = 0.0;
    MissionEventType type = MissionEventType::Arrived;
    int from_index = -1; // waypoint the event refers to
    int to_index = -1;   // next target (Arrived) or skip destination (Skipped)
    double distance_m = 0.0;       // measured distance at an Arrived trigger
    double elapsed_search_s = 0.0; // search time at the trigger
};

/// Executor state for one mission. Stepped by mission_step; frozen after
/// Completed or TimedOut.
struct MissionState {
    int current_index = 0;
    double elapsed_search_s = 0.0;
    bool skip_exempt = false;
    double clock_s = 0.0;
    bool frozen = false;
    std::vector<MissionEvent> events;

    double next_check_s = 0.0; // next patience boundary (relative to target acquisition)
};

struct UsageError : std::logic_error {
    using std::logic_error::logic_error;
};

MissionState make_mission_state(const MissionPlan& plan);

enum class ArrivalCheck { Arrived, NotYet };

/// Strict less-than radius test against the (noisy) fix. On arrival the target
/// advances sequentially, the search clock resets, and the exemption flag is
/// recomputed (only the final waypoint is exempt by position).
ArrivalCheck check_arrival(MissionState& state, const GeoPoint& fix,
                           const MissionPlan& plan);

enum class PatienceTick { Continue, SkipTriggered };

/// One patience check at the current elapsed search time. Exempt targets are
/// never skipped and consume no randomness.
PatienceTick patience_tick(const MissionState& state, const MissionPlan& plan,
                           double u);

/// Uniform choice over all strictly-later waypoints (final included). Logs the
/// Skipped event, retargets, and marks the new target exempt.
int select_shortcut(MissionState& state, const MissionPlan& plan, double u);

struct MissionStepResult {
    bool arrived = false;
    bool skipped = false;
    bool terminal = false;
};

/// Advance the mission by one dt: arrival check first, then a patience check
/// if a decision_tick boundary was crossed, then the time cap. Throws
/// UsageError when stepping a frozen mission.
MissionStepResult mission_step(MissionState& state, const GeoPoint& fix,
                               const MissionPlan& plan, Rng& patience_stream,
                               double dt_s);

} // namespace pnav
