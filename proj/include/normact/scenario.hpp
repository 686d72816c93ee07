#ifndef NORMACT_SCENARIO_HPP
#define NORMACT_SCENARIO_HPP

#include "normact/generative_model.hpp"

namespace normact {

// Fixed outcome/state orderings for the lane-yield task:
//   F1 locations 0..3 (reported 1-based), F2 {stay, cross}, F3 {normal, emergency}
//   M1 locations, M2 {full, dashed}, M3 {siren off, on}, M4 {honk off, on}
inline constexpr int kNumLocations = 4;
inline constexpr int kActionStay = 0;
inline constexpr int kActionSteer = 1;

/// Free parameters of the lane-yield model. The preference magnitudes and the
/// context switch probability are calibrated (see `normact calibrate`); the
/// siren reliability and initial beliefs are fixed by the task.
struct ScenarioParams {
    double siren_reliability = 0.875;
    double pref_target_normal = 0.5;
    double pref_target_emergency = 2.0;
    double pref_honk_on = -2.0;
    double context_switch_prob = 0.1;
    int horizon = 4;
    int trial_length = 10;

    void check() const; // throws InvalidInput on out-of-range values
};

LikelihoodTensor build_likelihood(const ScenarioParams& params);
TransitionSet build_transitions(const ScenarioParams& params);
PreferenceTensor build_preferences(const ScenarioParams& params);
InitialStateVector build_initial_states(const ScenarioParams& params);

/// Composes the builders into a validated model with the full policy set.
GenerativeModel build_model(const ScenarioParams& params);

} // namespace normact

#endif
