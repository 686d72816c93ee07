#include "normact/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace normact {

TrialTrace run_trial(const ScenarioParams& params, const EngineConfig& engine,
                     int condition_id, bool deterministic, std::uint64_t seed) {
    const GenerativeModel model = build_model(params);
    const ConditionScript script = build_condition(condition_id);
    WorldState world = WorldState::make(
        deterministic, seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(
                                                          condition_id));
    TrialEngine agent(model, engine);

    TrialTrace trace;
    trace.condition_id = condition_id;
    trace.params = params;
    trace.engine = engine;
    trace.deterministic = deterministic;
    trace.seed = seed;

    ObservationVector obs = observe(world, script, model);
    for (int t = 1; t <= params.trial_length; ++t) {
        TraceStep step;
        step.observation = obs;
        step.true_location = world.true_location + 1;
        step.true_context1 = static_cast<int>(script.context1[t - 1]);
        step.true_context2 = static_cast<int>(script.context2[t - 1]);

        const StepRecord record = agent.step(obs);
        for (const Vector& q : record.factor_posterior) {
            step.factor_posterior.emplace_back(q.data(), q.data() + q.size());
        }
        step.policy_posterior.assign(record.policy_posterior.data(),
                                     record.policy_posterior.data() +
                                         record.policy_posterior.size());
        for (const EfeEntry& e : record.efe.per_policy) {
            step.g_total.push_back(e.total);
            step.g_risk.push_back(e.risk);
            step.g_ambiguity.push_back(e.ambiguity);
        }
        step.gamma = record.precision.gamma;
        step.gamma_rate = record.precision.rate_of_change;
        step.action = record.action;
        trace.steps.push_back(std::move(step));

        if (t < params.trial_length) {
            obs = env_step(world, script, record.action, model);
        }
    }
    return trace;
}

namespace {

std::vector<int> location_path(const TrialTrace& trace) {
    std::vector<int> path;
    for (const TraceStep& s : trace.steps) path.push_back(s.true_location);
    return path;
}

std::string path_string(const std::vector<int>& path) {
    std::ostringstream os;
    for (size_t i = 0; i < path.size(); ++i) os << (i ? "-" : "") << path[i];
    return os.str();
}

std::vector<double> gamma_series(const TrialTrace& trace) {
    std::vector<double> g;
    for (const TraceStep& s : trace.steps) g.push_back(s.gamma);
    return g;
}

} // namespace

std::vector<CriterionResult> check_behavior(const std::vector<TrialTrace>& traces) {
    if (traces.size() != 7) {
        throw InvalidInput("check_behavior: expected traces for conditions 1..7");
    }
    std::vector<SummaryRow> rows;
    for (const auto& t : traces) rows.push_back(summarize(t));
    std::vector<CriterionResult> results;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
    };

    {
        const auto path = location_path(traces[0]);
        std::vector<int> want = {1, 2, 2, 2, 2, 2, 2, 2, 2, 2};
        add("condition 1: enter dilemma zone once, no honks",
            path == want && rows[0].honk_count == 0,
            "path " + path_string(path) + ", honks " +
                std::to_string(rows[0].honk_count));
    }
    {
        const auto path = location_path(traces[1]);
        const bool traj = path.size() >= 4 && path[0] == 1 && path[1] == 2 &&
                          path[2] == 3 && path[3] == 4;
        const bool honk = rows[1].honk_count == 1;
        const auto g2 = gamma_series(traces[1]);
        const auto g1 = gamma_series(traces[0]);
        bool gamma_ok = false;
        std::ostringstream detail;
        if (rows[1].first_cross_step) {
            const int cross = *rows[1].first_cross_step;
            const double at_cross = g2[cross - 1];
            gamma_ok = true;
            for (int s = 1; s < cross; ++s) gamma_ok = gamma_ok && at_cross > g2[s - 1];
            const double c1_max = *std::max_element(g1.begin(), g1.end());
            gamma_ok = gamma_ok && at_cross > c1_max;
            detail << "gamma at crossing " << at_cross << ", condition-1 max "
                   << c1_max << ", ";
        }
        detail << "path " << path_string(path) << ", honks " << rows[1].honk_count;
        add("condition 2: cross 1-2-3-4 with one honk, gamma spike at crossing",
            traj && honk && gamma_ok, detail.str());
    }
    {
        const auto path = location_path(traces[2]);
        const bool reach = path.size() >= 4 && path[3] == 4;
        const bool mean_order = rows[2].mean_gamma < rows[3].mean_gamma;
        std::ostringstream detail;
        detail << "path " << path_string(path) << ", honks " << rows[2].honk_count
               << ", mean gamma C3 " << rows[2].mean_gamma << " vs C4 "
               << rows[3].mean_gamma;
        add("condition 3: reach target by step 4, no honks, mean gamma below C4",
            reach && rows[2].honk_count == 0 && mean_order, detail.str());
    }
    {
        const bool same = location_path(traces[3]) == location_path(traces[2]);
        const auto g = gamma_series(traces[3]);
        const bool rising = g.back() > g.front();
        std::ostringstream detail;
        detail << "first-step gamma " << g.front() << ", last-step " << g.back();
        add("condition 4: same trajectory as 3, gamma higher at trial end",
            same && rising, detail.str());
    }
    {
        const bool ok = rows[4].first_cross_step && *rows[4].first_cross_step >= 7 &&
                        rows[4].honk_count == 0 && rows[4].final_location == 4;
        add("condition 5: cross only once the line is dashed",
            ok,
            "first-cross " +
                (rows[4].first_cross_step
                     ? std::to_string(*rows[4].first_cross_step)
                     : std::string("none")) +
                ", honks " + std::to_string(rows[4].honk_count) + ", final " +
                std::to_string(rows[4].final_location));
    }
    {
        const bool ok = rows[5].first_cross_step && *rows[5].first_cross_step <= 4 &&
                        rows[5].honk_count >= 1 && rows[5].final_location == 4;
        add("condition 6: cross early on the siren despite the full line",
            ok,
            "first-cross " +
                (rows[5].first_cross_step
                     ? std::to_string(*rows[5].first_cross_step)
                     : std::string("none")) +
                ", honks " + std::to_string(rows[5].honk_count) + ", final " +
                std::to_string(rows[5].final_location));
    }
    {
        const bool both = rows[6].first_cross_step && rows[5].first_cross_step;
        const bool ok = both && *rows[6].first_cross_step >= *rows[5].first_cross_step &&
                        *rows[6].first_cross_step >= 4;
        add("condition 7: delayed crossing relative to 6",
            ok,
            "first-cross C7 " +
                (rows[6].first_cross_step
                     ? std::to_string(*rows[6].first_cross_step)
                     : std::string("none")) +
                " vs C6 " +
                (rows[5].first_cross_step
                     ? std::to_string(*rows[5].first_cross_step)
                     : std::string("none")));
    }
    return results;
}

bool behavior_table_passes(const ScenarioParams& params, const EngineConfig& engine) {
    std::vector<TrialTrace> traces;
    for (int id = 1; id <= 7; ++id) {
        traces.push_back(run_trial(params, engine, id, true, 0));
    }
    const auto results = check_behavior(traces);
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.pass; });
}

const ScenarioParams& CalibrationReport::selected_params() const {
    if (selected < 0) throw InvalidState("calibration selected no parameters");
    return candidates[static_cast<size_t>(selected)].params;
}

CalibrationReport calibrate(const EngineConfig& engine,
                            const std::vector<double>& grid_target_normal,
                            const std::vector<double>& grid_target_emergency,
                            const std::vector<double>& grid_honk,
                            const std::vector<double>& grid_switch) {
    CalibrationReport report;
    for (double normal : grid_target_normal) {
        for (double emergency : grid_target_emergency) {
            for (double honk : grid_honk) {
                for (double sw : grid_switch) {
                    CalibrationCandidate cand;
                    cand.params.pref_target_normal = normal;
                    cand.params.pref_target_emergency = emergency;
                    cand.params.pref_honk_on = honk;
                    cand.params.context_switch_prob = sw;
                    try {
                        cand.params.check();
                        std::vector<TrialTrace> traces;
                        for (int id = 1; id <= 7; ++id) {
                            traces.push_back(
                                run_trial(cand.params, engine, id, true, 0));
                        }
                        cand.pass = true;
                        for (const auto& r : check_behavior(traces)) {
                            if (!r.pass) {
                                cand.pass = false;
                                cand.first_failure = r.name + " (" + r.detail + ")";
                                break;
                            }
                        }
                    } catch (const std::exception& e) {
                        cand.pass = false;
                        cand.first_failure = e.what();
                    }
                    if (cand.pass && report.selected < 0) {
                        report.selected = static_cast<int>(report.candidates.size());
                    }
                    report.candidates.push_back(std::move(cand));
                }
            }
        }
    }
    return report;
}

std::vector<SummaryRow> run_and_write(const RunRequest& request,
                                      std::vector<TrialTrace>* traces_out) {
    if (request.condition_ids.empty()) {
        throw InvalidInput("run: at least one condition required");
    }
    std::vector<int> ids = request.condition_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids) {
        if (id < 1 || id > 7) {
            throw InvalidInput("run: condition id " + std::to_string(id) +
                               " out of range 1..7");
        }
    }
    std::filesystem::create_directories(request.out_dir);

    std::vector<SummaryRow> rows;
    for (int id : ids) {
        const TrialTrace trace = run_trial(request.params, request.engine, id,
                                           request.deterministic, request.seed);
        const auto base =
            std::filesystem::path(request.out_dir) /
            ("condition-" + std::to_string(id) + ".trace");
        auto write = [&](const std::string& ext, TraceFormat fmt) {
            std::ofstream out(base.string() + ext, std::ios::binary);
            if (!out) throw IoError("cannot write " + base.string() + ext);
            out << export_trace(trace, fmt);
        };
        if (request.write_json) write(".json", TraceFormat::Json);
        if (request.write_csv) write(".csv", TraceFormat::Csv);
        rows.push_back(summarize(trace));
        if (traces_out) traces_out->push_back(trace);
    }
    return rows;
}

std::string sparkline(const std::vector<double>& values) {
    static const char* blocks[] = {"▁", "▂", "▃", "▄",
                                   "▅", "▆", "▇", "█"};
    if (values.empty()) return "";
    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    std::string out;
    for (double v : values) {
        const double x = hi > lo ? (v - lo) / (hi - lo) : 0.0;
        out += blocks[std::min(7, static_cast<int>(x * 8.0))];
    }
    return out;
}

} // namespace normact
