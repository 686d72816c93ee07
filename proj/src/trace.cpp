#include "normact/trace.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace normact {

using nlohmann::json;

TraceFormat parse_trace_format(const std::string& name) {
    if (name == "json") return TraceFormat::Json;
    if (name == "csv") return TraceFormat::Csv;
    throw InvalidInput("unsupported trace format: " + name);
}

namespace {

json params_to_json(const ScenarioParams& p) {
    return json{{"siren_reliability", p.siren_reliability},
                {"pref_target_normal", p.pref_target_normal},
                {"pref_target_emergency", p.pref_target_emergency},
                {"pref_honk_on", p.pref_honk_on},
                {"context_switch_prob", p.context_switch_prob},
                {"horizon", p.horizon},
                {"trial_length", p.trial_length}};
}

ScenarioParams params_from_json(const json& j) {
    ScenarioParams p;
    p.siren_reliability = j.at("siren_reliability");
    p.pref_target_normal = j.at("pref_target_normal");
    p.pref_target_emergency = j.at("pref_target_emergency");
    p.pref_honk_on = j.at("pref_honk_on");
    p.context_switch_prob = j.at("context_switch_prob");
    p.horizon = j.at("horizon");
    p.trial_length = j.at("trial_length");
    return p;
}

json engine_to_json(const EngineConfig& c) {
    return json{{"state_max_iterations", c.state_max_iterations},
                {"state_tolerance", c.state_tolerance},
                {"beta_prior", c.beta_prior},
                {"precision_iterations", c.precision_iterations},
                {"precision_tolerance", c.precision_tolerance},
                {"epsilon", c.epsilon}};
}

EngineConfig engine_from_json(const json& j) {
    EngineConfig c;
    c.state_max_iterations = j.at("state_max_iterations");
    c.state_tolerance = j.at("state_tolerance");
    c.beta_prior = j.at("beta_prior");
    c.precision_iterations = j.at("precision_iterations");
    c.precision_tolerance = j.at("precision_tolerance");
    c.epsilon = j.at("epsilon");
    return c;
}

std::string csv_export(const TrialTrace& trace) {
    std::ostringstream os;
    os << "step,series,index,value\n";
    os << std::setprecision(17);
    auto row = [&](int step, const std::string& series, size_t index, double value) {
        os << step << "," << series << "," << index << "," << value << "\n";
    };
    for (size_t s = 0; s < trace.steps.size(); ++s) {
        const TraceStep& st = trace.steps[s];
        const int step = static_cast<int>(s) + 1;
        for (size_t m = 0; m < st.observation.size(); ++m) {
            row(step, "observation", m, st.observation[m]);
        }
        row(step, "true_state", 0, st.true_location);
        row(step, "true_state", 1, st.true_context1);
        row(step, "true_state", 2, st.true_context2);
        for (size_t f = 0; f < st.factor_posterior.size(); ++f) {
            for (size_t i = 0; i < st.factor_posterior[f].size(); ++i) {
                row(step, "belief_f" + std::to_string(f + 1), i,
                    st.factor_posterior[f][i]);
            }
        }
        for (size_t p = 0; p < st.policy_posterior.size(); ++p) {
            row(step, "policy_posterior", p, st.policy_posterior[p]);
        }
        for (size_t p = 0; p < st.g_total.size(); ++p) {
            row(step, "g_total", p, st.g_total[p]);
            row(step, "g_risk", p, st.g_risk[p]);
            row(step, "g_ambiguity", p, st.g_ambiguity[p]);
        }
        row(step, "gamma", 0, st.gamma);
        row(step, "gamma_rate", 0, st.gamma_rate);
        row(step, "action", 0, st.action);
    }
    return os.str();
}

} // namespace

std::string export_trace(const TrialTrace& trace, TraceFormat format) {
    if (trace.steps.empty()) {
        throw InvalidInput("export_trace: trace has no steps");
    }
    if (format == TraceFormat::Csv) return csv_export(trace);

    json steps = json::array();
    for (const TraceStep& st : trace.steps) {
        steps.push_back(json{{"observation", st.observation},
                             {"true_location", st.true_location},
                             {"true_context1", st.true_context1},
                             {"true_context2", st.true_context2},
                             {"factor_posterior", st.factor_posterior},
                             {"policy_posterior", st.policy_posterior},
                             {"g_total", st.g_total},
                             {"g_risk", st.g_risk},
                             {"g_ambiguity", st.g_ambiguity},
                             {"gamma", st.gamma},
                             {"gamma_rate", st.gamma_rate},
                             {"action", st.action}});
    }
    const json doc{{"schema", trace.schema},
                   {"condition", trace.condition_id},
                   {"params", params_to_json(trace.params)},
                   {"engine", engine_to_json(trace.engine)},
                   {"deterministic", trace.deterministic},
                   {"seed", trace.seed},
                   {"steps", steps}};
    return doc.dump(2) + "\n";
}

TrialTrace import_trace_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("import_trace: parse failure: ") + e.what());
    }
    if (doc.value("schema", "") != kTraceSchema) {
        throw InvalidInput("import_trace: unknown schema tag");
    }
    TrialTrace trace;
    trace.condition_id = doc.at("condition");
    trace.params = params_from_json(doc.at("params"));
    trace.engine = engine_from_json(doc.at("engine"));
    trace.deterministic = doc.at("deterministic");
    trace.seed = doc.at("seed");
    for (const json& j : doc.at("steps")) {
        TraceStep st;
        st.observation = j.at("observation").get<ObservationVector>();
        st.true_location = j.at("true_location");
        st.true_context1 = j.at("true_context1");
        st.true_context2 = j.at("true_context2");
        st.factor_posterior =
            j.at("factor_posterior").get<std::vector<std::vector<double>>>();
        st.policy_posterior = j.at("policy_posterior").get<std::vector<double>>();
        st.g_total = j.at("g_total").get<std::vector<double>>();
        st.g_risk = j.at("g_risk").get<std::vector<double>>();
        st.g_ambiguity = j.at("g_ambiguity").get<std::vector<double>>();
        st.gamma = j.at("gamma");
        st.gamma_rate = j.at("gamma_rate");
        st.action = j.at("action");
        trace.steps.push_back(std::move(st));
    }
    if (trace.steps.empty()) {
        throw InvalidInput("import_trace: trace has no steps");
    }
    return trace;
}

SummaryRow summarize(const TrialTrace& trace) {
    SummaryRow row;
    row.condition_id = trace.condition_id;
    double gamma_sum = 0.0;
    for (size_t s = 0; s < trace.steps.size(); ++s) {
        const TraceStep& st = trace.steps[s];
        const int step = static_cast<int>(s) + 1;
        if (st.true_location == 3 && !row.first_cross_step) {
            row.first_cross_step = step;
        }
        if (st.observation.size() > 3 && st.observation[3] == 1) {
            ++row.honk_count;
        }
        gamma_sum += st.gamma;
        if (st.gamma > row.peak_gamma) {
            row.peak_gamma = st.gamma;
            row.peak_gamma_step = step;
        }
    }
    row.final_location = trace.steps.back().true_location;
    row.mean_gamma = gamma_sum / static_cast<double>(trace.steps.size());
    return row;
}

std::string summary_table(const std::vector<SummaryRow>& rows) {
    std::ostringstream os;
    os << "condition  first-cross  final-loc  honks  mean-gamma  peak-gamma  peak-step\n";
    for (const SummaryRow& r : rows) {
        os << std::setw(9) << r.condition_id << "  " << std::setw(11)
           << (r.first_cross_step ? std::to_string(*r.first_cross_step) : "none")
           << "  " << std::setw(9) << r.final_location << "  " << std::setw(5)
           << r.honk_count << "  " << std::setw(10) << std::fixed
           << std::setprecision(4) << r.mean_gamma << "  " << std::setw(10)
           << r.peak_gamma << "  " << std::setw(9) << r.peak_gamma_step << "\n";
        os.unsetf(std::ios::fixed);
    }
    return os.str();
}

} // namespace normact
