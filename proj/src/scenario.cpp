#include "normact/scenario.hpp"

namespace normact {

namespace {

int joint_index(int loc, int c1, int c2) {
    return loc + kNumLocations * (c1 + 2 * c2);
}

} // namespace

void ScenarioParams::check() const {
    if (!(siren_reliability > 0.0 && siren_reliability < 1.0)) {
        throw InvalidInput("siren_reliability must be in (0,1)");
    }
    if (!(context_switch_prob > 0.0 && context_switch_prob < 1.0)) {
        throw InvalidInput("context_switch_prob must be in (0,1)");
    }
    if (!(pref_target_emergency > pref_target_normal && pref_target_normal > 0.0)) {
        throw InvalidInput("need pref_target_emergency > pref_target_normal > 0");
    }
    if (!(pref_honk_on <= 0.0)) {
        throw InvalidInput("pref_honk_on must not be positive");
    }
    if (horizon < 1 || trial_length < 1 || horizon > trial_length) {
        throw InvalidInput("need 1 <= horizon <= trial_length");
    }
}

LikelihoodTensor build_likelihood(const ScenarioParams& params) {
    params.check();
    const int joint = kNumLocations * 2 * 2;
    Matrix m1 = Matrix::Zero(kNumLocations, joint); // observed location
    Matrix m2 = Matrix::Zero(2, joint);             // line cue (full, dashed)
    Matrix m3 = Matrix::Zero(2, joint);             // siren (off, on)
    Matrix m4 = Matrix::Zero(2, joint);             // honk (off, on)
    const double r = params.siren_reliability;

    for (int loc = 0; loc < kNumLocations; ++loc) {
        for (int c1 = 0; c1 < 2; ++c1) {
            for (int c2 = 0; c2 < 2; ++c2) {
                const int j = joint_index(loc, c1, c2);
                m1(loc, j) = 1.0; // the agent always sees where it is

                // Line cue: uncertain at the start and target locations,
                // deterministic full<->stay / dashed<->cross at 2 and 3.
                if (loc == 0 || loc == 3) {
                    m2(0, j) = 0.5;
                    m2(1, j) = 0.5;
                } else {
                    m2(c1, j) = 1.0;
                }

                // Siren: mostly off under normal, inverted under emergency;
                // independent of location and the line context.
                m3(0, j) = c2 == 0 ? r : 1.0 - r;
                m3(1, j) = c2 == 0 ? 1.0 - r : r;

                // Honk: on exactly when crossing where the line says stay.
                const bool honked = (loc == 2 && c1 == 0);
                m4(honked ? 1 : 0, j) = 1.0;
            }
        }
    }
    return LikelihoodTensor{{m1, m2, m3, m4}};
}

TransitionSet build_transitions(const ScenarioParams& params) {
    params.check();
    Matrix stay = Matrix::Identity(kNumLocations, kNumLocations);
    Matrix steer = Matrix::Zero(kNumLocations, kNumLocations);
    steer(1, 0) = 1.0;
    steer(2, 1) = 1.0;
    steer(3, 2) = 1.0;
    steer(2, 3) = 1.0;

    const double p = params.context_switch_prob;
    Matrix drift(2, 2);
    drift << 1.0 - p, p, p, 1.0 - p;

    TransitionSet B;
    B.factor = {{stay, steer}, {drift}, {drift}};
    return B;
}

PreferenceTensor build_preferences(const ScenarioParams& params) {
    params.check();
    Matrix c1 = Matrix::Zero(kNumLocations, 2);
    c1(3, 0) = params.pref_target_normal;
    c1(3, 1) = params.pref_target_emergency;
    Matrix c4 = Matrix::Zero(2, 2);
    c4(1, 0) = params.pref_honk_on;
    c4(1, 1) = params.pref_honk_on;
    return PreferenceTensor{{c1, Matrix::Zero(2, 2), Matrix::Zero(2, 2), c4}};
}

InitialStateVector build_initial_states(const ScenarioParams& params) {
    params.check();
    Vector d1 = Vector::Zero(kNumLocations);
    d1[0] = 1.0;
    Vector d2(2);
    d2 << 0.5, 0.5;
    Vector d3(2);
    d3 << 0.875, 0.125;
    return InitialStateVector{{d1, d2, d3}};
}

GenerativeModel build_model(const ScenarioParams& params) {
    params.check();
    GenerativeModel model;
    model.shape.states_per_factor = {kNumLocations, 2, 2};
    model.shape.outcomes_per_modality = {kNumLocations, 2, 2, 2};
    model.shape.trial_length = params.trial_length;
    model.shape.horizon = params.horizon;
    model.A = build_likelihood(params);
    model.B = build_transitions(params);
    model.C = build_preferences(params);
    model.D = build_initial_states(params);
    model.preference_context_factor = 2;
    model.policies = enumerate_policies(2, params.horizon);

    const auto report = validate(model);
    if (!report.ok()) {
        throw InvalidState("build_model produced an invalid model:\n" +
                           report.to_string());
    }
    return model;
}

} // namespace normact
