#ifndef NORMACT_HARNESS_HPP
#define NORMACT_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "normact/trace.hpp"

namespace normact {

/// Runs one scripted condition end to end and records the full trace.
TrialTrace run_trial(const ScenarioParams& params, const EngineConfig& engine,
                     int condition_id, bool deterministic, std::uint64_t seed);

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The per-condition behavior table (trajectories, honks, gamma ordering).
/// Expects traces for conditions 1..7 in order.
std::vector<CriterionResult> check_behavior(const std::vector<TrialTrace>& traces);

/// True when every row of the behavior table passes for these parameters.
bool behavior_table_passes(const ScenarioParams& params, const EngineConfig& engine);

struct CalibrationCandidate {
    ScenarioParams params;
    bool pass = false;
    std::string first_failure;
};

struct CalibrationReport {
    std::vector<CalibrationCandidate> candidates;
    int selected = -1; // index of the first passing tuple, -1 if none

    bool ok() const { return selected >= 0; }
    const ScenarioParams& selected_params() const;
};

/// Grid search over the free preference/switch parameters; accepts the first
/// tuple (in grid order) whose trajectories satisfy the behavior table.
CalibrationReport calibrate(const EngineConfig& engine,
                            const std::vector<double>& grid_target_normal =
                                {0.5, 1.0, 2.0},
                            const std::vector<double>& grid_target_emergency =
                                {2.0, 4.0, 6.0},
                            const std::vector<double>& grid_honk = {-2.0, -4.0,
                                                                    -6.0},
                            const std::vector<double>& grid_switch = {0.05, 0.1,
                                                                      0.2});

struct RunRequest {
    std::vector<int> condition_ids;
    ScenarioParams params;
    EngineConfig engine;
    std::uint64_t seed = 0;
    bool deterministic = true;
    std::string out_dir = ".";
    bool write_json = true;
    bool write_csv = false;
};

/// Runs every requested condition, writes `condition-<id>.trace.json` (and/or
/// `.csv`) into out_dir, and returns the summaries ordered by condition id.
/// When traces_out is non-null the full traces are copied there as well.
std::vector<SummaryRow> run_and_write(const RunRequest& request,
                                      std::vector<TrialTrace>* traces_out = nullptr);

/// Unicode block sparkline of a series, scaled to its own min/max.
std::string sparkline(const std::vector<double>& values);

} // namespace normact

#endif
