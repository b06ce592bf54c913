#pragma once

#include <string>

#include "pnav/experiment.hpp"
#include "pnav/roadrl.hpp"

namespace pnav {

std::string event_line(const MissionEvent& ev, const MissionPlan& plan);

/// report.json: config echo, aggregate block, per-trial records with
/// line-format event logs and trajectory file references. Keys are sorted and
/// value formatting is canonical, so identical runs produce identical bytes.
void write_report_json(const ExperimentResult& result, const std::string& path);

/// One row per trial plus a header.
void write_summary_csv(const ExperimentResult& result, const std::string& path);

/// GeoJSON FeatureCollection: the fix trace as a LineString with per-point
/// time / on_road / cumulative energy, plus Points for waypoints and for each
/// Arrived/Skipped event. Coordinates are lon,lat.
std::string trajectory_geojson(const TrialResult& trial, const ExperimentSpec& spec);

void write_trajectory_geojson(const TrialResult& trial, const ExperimentSpec& spec,
                              const std::string& path);

/// Loaded view of a report.json; aggregates are recomputed from the per-trial
/// records on load and verified against the stored block.
struct LoadedReport {
    int trials = 0;
    Aggregate aggregate;
    std::vector<std::string> trajectory_files;
};

LoadedReport load_report_json(const std::string& path);

/// Parse + canonically re-serialize one of our GeoJSON files (round-trip
/// check; re-serialization is byte-identical for files we wrote).
std::string reserialize_geojson(const std::string& path);

void write_learning_curve_csv(const std::vector<EpisodeStats>& curve,
                              const std::string& path);

void write_wait_curve_csv(const WaitCurve& low, const WaitCurve& high,
                          const std::string& path);

void write_wait_curve_svg(const WaitCurve& low, const WaitCurve& high,
                          const std::string& path);

} // namespace pnav
