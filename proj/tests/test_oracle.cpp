#include <doctest.h>

#include <algorithm>

#include "oracle_support.hpp"

using namespace normact;

TEST_CASE("oracle sanity: single identity observation is plain Bayes") {
    GenerativeModel model;
    model.shape.states_per_factor = {2};
    model.shape.outcomes_per_modality = {2};
    model.shape.trial_length = 2;
    model.shape.horizon = 1;
    Matrix a(2, 2);
    a << 0.8, 0.2, 0.2, 0.8;
    model.A.modality = {a};
    model.B.factor = {{Matrix::Identity(2, 2)}};
    model.C.modality = {Matrix::Zero(2, 2)};
    model.D.factor = {Vector::Ones(2) / 2.0};
    model.policies = enumerate_policies(1, 1);

    ObservationHistory history;
    history.observations.push_back({0});
    const Vector q = oracle::brute_force_posterior(model, history);
    CHECK(q[0] == doctest::Approx(0.8));
    CHECK(q[1] == doctest::Approx(0.2));
}

TEST_CASE("engine matches the brute-force oracle on randomized models") {
    std::mt19937_64 rng(20240817);
    int checked = 0;
    double worst = 0.0;
    while (checked < 120) {
        const auto trial = oracle::random_small_trial(rng);
        const Vector expected =
            oracle::brute_force_posterior(trial.model, trial.history);
        if (expected.sum() == 0.0) continue; // impossible history under this model

        const auto slice = infer_states(trial.model, trial.model.policies[0],
                                        trial.history, EngineConfig{});
        const Vector got = slice.joint[trial.history.current_step() - 1];
        const double err = (got - expected).cwiseAbs().maxCoeff();
        CHECK(err < 1e-3);
        worst = std::max(worst, err);
        ++checked;
    }
    CHECK(checked == 120);
    MESSAGE("worst max-abs deviation: ", worst);
}

TEST_CASE("oracle agreement holds for every policy, not just the first") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 30; ++t) {
        const auto trial = oracle::random_small_trial(rng);
        const Vector expected =
            oracle::brute_force_posterior(trial.model, trial.history);
        if (expected.sum() == 0.0) continue;
        for (const auto& policy : trial.model.policies) {
            const auto slice =
                infer_states(trial.model, policy, trial.history, EngineConfig{});
            const Vector got = slice.joint[trial.history.current_step() - 1];
            CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-3);
        }
    }
}
