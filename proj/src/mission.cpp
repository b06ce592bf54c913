#include "pnav/mission.hpp"

#include <cmath>

namespace pnav {

void MissionPlan::validate() const {
    if (waypoints.size() < 2)
        throw std::invalid_argument("mission needs at least 2 waypoints");
    if (!(arrival_radius_m > 0.0))
        throw std::invalid_argument("arrival radius must be > 0");
    if (!(decision_tick_s > 0.0))
        throw std::invalid_argument("decision tick must be > 0");
    if (!(max_mission_time_s > 0.0))
        throw std::invalid_argument("max mission time must be > 0");
    patience.validate();
    for (const auto& wp : waypoints) validate_geo_point(wp.point);
}

MissionState make_mission_state(const MissionPlan& plan) {
    plan.validate();
    MissionState s;
    s.current_index = 0;
    s.skip_exempt = (plan.final_index() == 0);
    s.next_check_s = plan.decision_tick_s;
    return s;
}

ArrivalCheck check_arrival(MissionState& state, const GeoPoint& fix,
                           const MissionPlan& plan) {
    if (state.frozen)
        throw UsageError("check_arrival on a frozen mission");
    const GeoPoint target = plan.waypoints[state.current_index].point;
    const double d = haversine_distance(fix, target);
    if (!(d < plan.arrival_radius_m))
        return ArrivalCheck::NotYet;

    MissionEvent ev;
    ev.time_s = state.clock_s;
    ev.type = MissionEventType::Arrived;
    ev.from_index = state.current_index;
    ev.distance_m = d;
    ev.elapsed_search_s = state.elapsed_search_s;

    if (state.current_index == plan.final_index()) {
        ev.to_index = -1;
        state.events.push_back(ev);
        MissionEvent done;
        done.time_s = state.clock_s;
        done.type = MissionEventType::Completed;
        done.from_index = state.current_index;
        state.events.push_back(done);
        state.frozen = true;
    } else {
        state.current_index += 1;
        ev.to_index = state.current_index;
        state.events.push_back(ev);
        state.elapsed_search_s = 0.0;
        state.next_check_s = plan.decision_tick_s;
        state.skip_exempt = (state.current_index == plan.final_index());
    }
    return ArrivalCheck::Arrived;
}

PatienceTick patience_tick(const MissionState& state, const MissionPlan& plan,
                           double u) {
    if (state.skip_exempt)
        return PatienceTick::Continue;
    return decide_wait(state.elapsed_search_s, plan.patience, u) == WaitDecision::Skip
               ? PatienceTick::SkipTriggered
               : PatienceTick::Continue;
}

int select_shortcut(MissionState& state, const MissionPlan& plan, double u) {
    const int n = static_cast<int>(plan.waypoints.size());
    const int i = state.current_index;
    if (i >= n - 1)
        throw std::logic_error("select_shortcut: final waypoint is skip-exempt");
    const int choices = n - 1 - i; // indices i+1 .. n-1
    int k = static_cast<int>(u * choices);
    if (k >= choices) k = choices - 1;
    const int target = i + 1 + k;

    MissionEvent ev;
    ev.time_s = state.clock_s;
    ev.type = MissionEventType::Skipped;
    ev.from_index = i;
    ev.to_index = target;
    ev.elapsed_search_s = state.elapsed_search_s;
    state.events.push_back(ev);

    state.current_index = target;
    state.elapsed_search_s = 0.0;
    state.next_check_s = plan.decision_tick_s;
    state.skip_exempt = true; // shortcut targets must be reached
    return target;
}

MissionStepResult mission_step(MissionState& state, const GeoPoint& fix,
                               const MissionPlan& plan, Rng& patience_stream,
                               double dt_s) {
    if (state.frozen)
        throw UsageError("mission_step on a frozen mission");
    MissionStepResult res;

    if (check_arrival(state, fix, plan) == ArrivalCheck::Arrived) {
        res.arrived = true;
        if (state.frozen) {
            res.terminal = true;
            return res;
        }
    } else if (state.elapsed_search_s >= state.next_check_s - 1e-9) {
        // Patience decision at the tick boundary; snap the search clock to the
        // exact boundary so decisions and logged times match the discrete
        // skip-time oracle.
        state.elapsed_search_s = state.next_check_s;
        state.next_check_s += plan.decision_tick_s;
        if (!state.skip_exempt) {
            const double u = patience_stream.uniform();
            if (patience_tick(state, plan, u) == PatienceTick::SkipTriggered) {
                select_shortcut(state, plan, patience_stream.uniform());
                res.skipped = true;
            }
        }
    }

    state.clock_s += dt_s;
    state.elapsed_search_s += dt_s;

    if (state.clock_s > plan.max_mission_time_s) {
        MissionEvent ev;
        ev.time_s = state.clock_s;
        ev.type = MissionEventType::TimedOut;
        ev.from_index = state.current_index;
        ev.elapsed_search_s = state.elapsed_search_s;
        state.events.push_back(ev);
        state.frozen = true;
        res.terminal = true;
    }
    return res;
}

} // namespace pnav
