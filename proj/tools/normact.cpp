// normact: run the lane-yield active-inference scenario from the shell.
//
// Exit codes: 0 ok, 1 validation failure, 2 bad input, 3 io failure,
// 4 calibration found no passing parameters.

#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "normact/harness.hpp"
#include "normact/model_io.hpp"

namespace {

using namespace normact;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitIo = 3;
constexpr int kExitCalibration = 4;

std::vector<int> parse_conditions(const std::string& spec) {
    if (spec == "all") return {1, 2, 3, 4, 5, 6, 7};
    std::vector<int> ids;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t used = 0;
        int id = 0;
        try {
            id = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw InvalidInput("bad condition list: " + spec);
        }
        if (used != tok.size()) throw InvalidInput("bad condition list: " + spec);
        ids.push_back(id);
    }
    if (ids.empty()) throw InvalidInput("empty condition list");
    return ids;
}

std::pair<std::string, double> parse_override(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
        throw InvalidInput("override must look like key=value: " + kv);
    }
    const std::string key = kv.substr(0, eq);
    try {
        return {key, std::stod(kv.substr(eq + 1))};
    } catch (const std::exception&) {
        throw InvalidInput("bad numeric value in override: " + kv);
    }
}

void apply_param(ScenarioParams& p, const std::string& key, double value) {
    if (key == "siren_reliability") p.siren_reliability = value;
    else if (key == "pref_target_normal") p.pref_target_normal = value;
    else if (key == "pref_target_emergency") p.pref_target_emergency = value;
    else if (key == "pref_honk_on") p.pref_honk_on = value;
    else if (key == "context_switch_prob") p.context_switch_prob = value;
    else if (key == "horizon") p.horizon = static_cast<int>(value);
    else if (key == "trial_length") p.trial_length = static_cast<int>(value);
    else throw InvalidInput("unknown scenario parameter: " + key);
}

void apply_engine(EngineConfig& c, const std::string& key, double value) {
    if (key == "state_max_iterations") c.state_max_iterations = static_cast<int>(value);
    else if (key == "state_tolerance") c.state_tolerance = value;
    else if (key == "beta_prior") c.beta_prior = value;
    else if (key == "precision_iterations") c.precision_iterations = static_cast<int>(value);
    else if (key == "precision_tolerance") c.precision_tolerance = value;
    else if (key == "epsilon") c.epsilon = value;
    else throw InvalidInput("unknown engine setting: " + key);
}

std::string default_out_dir() {
    const char* env = std::getenv("NORMACT_OUT");
    return env ? env : ".";
}

int cmd_run(const std::string& conditions, std::uint64_t seed, bool deterministic,
            const std::string& out_dir, const std::string& format,
            const std::vector<std::string>& params,
            const std::vector<std::string>& engine_overrides) {
    RunRequest request;
    request.condition_ids = parse_conditions(conditions);
    request.seed = seed;
    request.deterministic = deterministic;
    request.out_dir = out_dir;
    if (format == "json") {
        request.write_json = true;
        request.write_csv = false;
    } else if (format == "csv") {
        request.write_json = false;
        request.write_csv = true;
    } else if (format == "both") {
        request.write_json = request.write_csv = true;
    } else {
        throw InvalidInput("unknown format: " + format);
    }
    for (const auto& kv : params) {
        const auto [key, value] = parse_override(kv);
        apply_param(request.params, key, value);
    }
    for (const auto& kv : engine_overrides) {
        const auto [key, value] = parse_override(kv);
        apply_engine(request.engine, key, value);
    }
    request.params.check();
    request.engine.check();

    std::vector<TrialTrace> traces;
    const auto rows = run_and_write(request, &traces);
    std::cout << summary_table(rows);
    std::cout << "\ngamma per step:\n";
    for (const auto& trace : traces) {
        std::vector<double> g;
        for (const auto& s : trace.steps) g.push_back(s.gamma);
        std::cout << "  condition " << trace.condition_id << "  " << sparkline(g)
                  << "\n";
    }
    return kExitOk;
}

int cmd_calibrate() {
    EngineConfig engine;
    const CalibrationReport report = calibrate(engine);
    for (const auto& cand : report.candidates) {
        const auto& p = cand.params;
        std::cout << (cand.pass ? "PASS" : "fail") << "  normal="
                  << p.pref_target_normal << " emergency=" << p.pref_target_emergency
                  << " honk=" << p.pref_honk_on << " switch="
                  << p.context_switch_prob;
        if (!cand.pass) std::cout << "  [" << cand.first_failure << "]";
        std::cout << "\n";
    }
    if (!report.ok()) {
        std::cerr << "calibration: no tuple satisfies the behavior table\n";
        return kExitCalibration;
    }
    const auto& p = report.selected_params();
    std::cout << "selected: pref_target_normal=" << p.pref_target_normal
              << " pref_target_emergency=" << p.pref_target_emergency
              << " pref_honk_on=" << p.pref_honk_on
              << " context_switch_prob=" << p.context_switch_prob << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& path) {
    GenerativeModel model;
    try {
        model = load_model(path);
    } catch (const IoError& e) {
        std::cerr << e.what() << "\n";
        return kExitBadInput;
    } catch (const InvalidInput& e) {
        // load_model validates; a well-formed file with bad tensors lands here
        const std::string what = e.what();
        std::cerr << what << "\n";
        return what.find("parse failure") != std::string::npos ? kExitBadInput
                                                               : kExitValidation;
    }
    const auto report = validate(model);
    if (!report.ok()) {
        std::cerr << report.to_string();
        return kExitValidation;
    }
    std::cout << "ok\n";
    return kExitOk;
}

int cmd_scenario_dump(const std::string& out_path,
                      const std::vector<std::string>& params) {
    ScenarioParams p;
    for (const auto& kv : params) {
        const auto [key, value] = parse_override(kv);
        apply_param(p, key, value);
    }
    const GenerativeModel model = build_model(p);
    if (out_path.empty()) {
        std::cout << model_to_json(model);
    } else {
        save_model(model, out_path);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"normative lane-yield scenario simulator"};
    app.require_subcommand(1);

    std::string conditions = "all";
    std::uint64_t seed = 0;
    bool deterministic = false;
    std::string out_dir = default_out_dir();
    std::string format = "json";
    std::vector<std::string> param_overrides, engine_overrides;

    auto* run = app.add_subcommand("run", "simulate scripted conditions");
    run->add_option("--conditions", conditions, "condition ids (e.g. 1,3,7) or 'all'");
    run->add_option("--seed", seed, "rng seed for sampled observations");
    run->add_flag("--deterministic", deterministic, "modal observations, no sampling");
    run->add_option("--out", out_dir, "output directory (default $NORMACT_OUT or .)");
    run->add_option("--format", format, "trace format: json|csv|both");
    run->add_option("--param", param_overrides, "scenario override key=value");
    run->add_option("--engine", engine_overrides, "engine override key=value");

    auto* cal = app.add_subcommand("calibrate", "grid-search the free parameters");

    std::string model_path;
    auto* val = app.add_subcommand("validate", "validate a model-spec JSON file");
    val->add_option("file", model_path, "model file")->required();

    auto* scenario = app.add_subcommand("scenario", "scenario model utilities");
    std::string dump_path;
    auto* dump = scenario->add_subcommand("dump", "emit the built model as JSON");
    dump->add_option("--out", dump_path, "write to file instead of stdout");
    dump->add_option("--param", param_overrides, "scenario override key=value");
    scenario->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (run->parsed()) {
            return cmd_run(conditions, seed, deterministic, out_dir, format,
                           param_overrides, engine_overrides);
        }
        if (cal->parsed()) return cmd_calibrate();
        if (val->parsed()) return cmd_validate(model_path);
        if (dump->parsed()) return cmd_scenario_dump(dump_path, param_overrides);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
