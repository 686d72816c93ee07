#ifndef NORMACT_TRACE_HPP
#define NORMACT_TRACE_HPP

#include <optional>
#include <string>
#include <vector>

#include "normact/inference.hpp"
#include "normact/scenario.hpp"

namespace normact {

inline constexpr const char* kTraceSchema = "normact-trace/1";

/// One recorded decision step.
struct TraceStep {
    ObservationVector observation;
    int true_location = 0;   // 1-based, 1..4
    int true_context1 = 0;   // 0 stay / 1 cross
    int true_context2 = 0;   // 0 normal / 1 emergency
    std::vector<std::vector<double>> factor_posterior;
    std::vector<double> policy_posterior;
    std::vector<double> g_total;
    std::vector<double> g_risk;
    std::vector<double> g_ambiguity;
    double gamma = 0.0;
    double gamma_rate = 0.0;
    int action = 0;
};

struct TrialTrace {
    std::string schema = kTraceSchema;
    int condition_id = 0;
    ScenarioParams params;
    EngineConfig engine;
    bool deterministic = true;
    std::uint64_t seed = 0;
    std::vector<TraceStep> steps;
};

struct SummaryRow {
    int condition_id = 0;
    std::optional<int> first_cross_step; // first step with true location 3
    int final_location = 0;              // 1-based
    int honk_count = 0;
    double mean_gamma = 0.0;
    double peak_gamma = 0.0;
    int peak_gamma_step = 0;
};

enum class TraceFormat { Json, Csv };

TraceFormat parse_trace_format(const std::string& name);

/// JSON: one schema-versioned document. CSV: long format with header
/// `step,series,index,value`. Throws InvalidInput on an empty trace.
std::string export_trace(const TrialTrace& trace, TraceFormat format);

/// Inverse of the JSON export.
TrialTrace import_trace_json(const std::string& text);

SummaryRow summarize(const TrialTrace& trace);

std::string summary_table(const std::vector<SummaryRow>& rows);

} // namespace normact

#endif
