#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "normact/harness.hpp"
#include "normact/trace.hpp"

using namespace normact;

namespace {

TrialTrace sample_trace() {
    TrialTrace trace;
    trace.condition_id = 3;
    trace.seed = 42;
    trace.deterministic = false;
    TraceStep step;
    step.observation = {0, 1, 0, 0};
    step.true_location = 2;
    step.true_context1 = 1;
    step.true_context2 = 0;
    step.factor_posterior = {{0.25, 0.75}, {0.125, 0.875}};
    step.policy_posterior = {0.7, 0.2, 0.1};
    step.g_total = {1.0, 2.0, 3.0};
    step.g_risk = {0.4, 1.1, 2.9};
    step.g_ambiguity = {0.6, 0.9, 0.1};
    step.gamma = 1.25;
    step.gamma_rate = 0.05;
    step.action = 1;
    trace.steps.push_back(step);
    step.true_location = 3;
    step.gamma = 1.0 / 3.0; // not representable in decimal; round-trip test
    trace.steps.push_back(step);
    return trace;
}

} // namespace

TEST_CASE("trace format names") {
    CHECK(parse_trace_format("json") == TraceFormat::Json);
    CHECK(parse_trace_format("csv") == TraceFormat::Csv);
    CHECK_THROWS_AS(parse_trace_format("yaml"), InvalidInput);
}

TEST_CASE("json export round-trips losslessly") {
    const TrialTrace trace = sample_trace();
    const auto text = export_trace(trace, TraceFormat::Json);
    CHECK(text.find(kTraceSchema) != std::string::npos);

    const TrialTrace back = import_trace_json(text);
    CHECK(back.condition_id == trace.condition_id);
    CHECK(back.seed == trace.seed);
    CHECK(back.deterministic == trace.deterministic);
    REQUIRE(back.steps.size() == trace.steps.size());
    for (size_t s = 0; s < trace.steps.size(); ++s) {
        CHECK(back.steps[s].observation == trace.steps[s].observation);
        CHECK(back.steps[s].true_location == trace.steps[s].true_location);
        CHECK(back.steps[s].factor_posterior == trace.steps[s].factor_posterior);
        CHECK(back.steps[s].policy_posterior == trace.steps[s].policy_posterior);
        CHECK(back.steps[s].g_total == trace.steps[s].g_total);
        CHECK(back.steps[s].gamma == trace.steps[s].gamma); // bit-exact
        CHECK(back.steps[s].action == trace.steps[s].action);
    }
    // and the re-export is byte-identical
    CHECK(export_trace(back, TraceFormat::Json) == text);
}

TEST_CASE("empty trace is rejected") {
    CHECK_THROWS_AS(export_trace(TrialTrace{}, TraceFormat::Json), InvalidInput);
    CHECK_THROWS_AS(export_trace(TrialTrace{}, TraceFormat::Csv), InvalidInput);
}

TEST_CASE("bad json is rejected") {
    CHECK_THROWS_AS(import_trace_json("{not json"), InvalidInput);
    CHECK_THROWS_AS(import_trace_json("{\"schema\":\"other/9\"}"), InvalidInput);
}

TEST_CASE("csv export is long format") {
    const auto text = export_trace(sample_trace(), TraceFormat::Csv);
    std::istringstream is(text);
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "step,series,index,value");
    int rows = 0;
    bool saw_gamma = false;
    while (std::getline(is, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 3);
        if (line.find(",gamma,") != std::string::npos) saw_gamma = true;
    }
    // 2 steps x (4 obs + 3 true + 4 beliefs + 3 posterior + 9 efe + 3 scalars)
    CHECK(rows == 2 * 26);
    CHECK(saw_gamma);
}

TEST_CASE("summarize picks out crossing, honks, and gamma stats") {
    TrialTrace trace = sample_trace();
    trace.steps[1].observation[3] = 1;
    const SummaryRow row = summarize(trace);
    CHECK(row.condition_id == 3);
    REQUIRE(row.first_cross_step);
    CHECK(*row.first_cross_step == 2);
    CHECK(row.final_location == 3);
    CHECK(row.honk_count == 1);
    CHECK(row.mean_gamma == doctest::Approx((1.25 + 1.0 / 3.0) / 2.0));
    CHECK(row.peak_gamma == doctest::Approx(1.25));
    CHECK(row.peak_gamma_step == 1);
}

TEST_CASE("summarize leaves first-cross unset when never crossing") {
    TrialTrace trace = sample_trace();
    for (auto& s : trace.steps) s.true_location = 2;
    CHECK_FALSE(summarize(trace).first_cross_step);
}

TEST_CASE("summary_table prints one row per summary") {
    TrialTrace trace = sample_trace();
    const auto table = summary_table({summarize(trace)});
    CHECK(table.find("condition") != std::string::npos);
    CHECK(table.find("\n") != std::string::npos);
}

TEST_CASE("a full condition trace exports and re-imports") {
    const TrialTrace trace =
        run_trial(ScenarioParams{}, EngineConfig{}, 1, true, 0);
    REQUIRE(trace.steps.size() == 10);
    const auto text = export_trace(trace, TraceFormat::Json);
    const TrialTrace back = import_trace_json(text);
    CHECK(export_trace(back, TraceFormat::Json) == text);
    CHECK(back.steps.size() == 10);
    CHECK(back.params.siren_reliability == trace.params.siren_reliability);
    CHECK(back.engine.beta_prior == trace.engine.beta_prior);
}

TEST_CASE("export does not mutate its input") {
    const TrialTrace trace = sample_trace();
    const auto first = export_trace(trace, TraceFormat::Json);
    const auto second = export_trace(trace, TraceFormat::Json);
    CHECK(first == second);
}

TEST_CASE("sparkline spans the block range") {
    const auto s = sparkline({0.0, 1.0});
    CHECK(s.find("▁") != std::string::npos);
    CHECK(s.find("█") != std::string::npos);
    CHECK(sparkline({}).empty());
}
