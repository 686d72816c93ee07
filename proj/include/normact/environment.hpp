#ifndef NORMACT_ENVIRONMENT_HPP
#define NORMACT_ENVIRONMENT_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "normact/generative_model.hpp"

namespace normact {

enum class LineContext : int { Stay = 0, Cross = 1 };
enum class EmergencyContext : int { Normal = 0, Emergency = 1 };

/// Exogenous true context states for one trial, fixed per condition.
struct ConditionScript {
    int id = 0;
    std::vector<LineContext> context1;       // length T
    std::vector<EmergencyContext> context2;  // length T
};

/// One outcome index per modality.
using ObservationVector = std::vector<int>;

/// Generative-process state for one trial.
struct WorldState {
    int true_location = 0; // 0-based, 0..3
    int step = 1;          // 1-based decision step
    bool deterministic = true;
    std::mt19937_64 rng;

    static WorldState make(bool deterministic, std::uint64_t seed);
};

/// The scripted context sequences for condition id 1..7.
ConditionScript build_condition(int id);

std::string script_to_json(const ConditionScript& script);

/// Observation at the world's current step, drawn from the process likelihood
/// at (true location, scripted contexts). Deterministic mode picks the modal
/// outcome, ties to the lowest index.
ObservationVector observe(WorldState& world, const ConditionScript& script,
                          const GenerativeModel& process_model);

/// Advances the true location under the chosen action and generates the next
/// step's observation. Throws TrialComplete when the trial is over.
ObservationVector env_step(WorldState& world, const ConditionScript& script,
                           int action, const GenerativeModel& process_model);

} // namespace normact

#endif
