#include "normact/inference.hpp"

#include <cmath>

namespace normact {

void EngineConfig::check() const {
    if (state_max_iterations < 1 || state_tolerance <= 0.0 || beta_prior <= 0.0 ||
        precision_iterations < 1 || precision_tolerance <= 0.0 || epsilon <= 0.0) {
        throw InvalidInput("EngineConfig: all fields must be positive");
    }
}

Vector EfeBreakdown::totals() const {
    Vector g(per_policy.size());
    for (size_t i = 0; i < per_policy.size(); ++i) g[i] = per_policy[i].total;
    return g;
}

namespace {

Vector normalized_or_floored(Vector w, double eps) {
    double sum = w.sum();
    if (!(sum > 0.0)) {
        w.array() += eps;
        sum = w.sum();
    }
    return w / sum;
}

// Product over modalities of the likelihood row selected by the observation.
Vector joint_likelihood(const GenerativeModel& model, const ObservationVector& obs) {
    const int n = model.shape.joint_states();
    Vector l = Vector::Ones(n);
    for (size_t m = 0; m < obs.size(); ++m) {
        if (obs[m] < 0 || obs[m] >= model.shape.outcomes_per_modality[m]) {
            throw InvalidInput("observation index out of range for modality " +
                               std::to_string(m));
        }
        l.array() *= model.A.modality[m].row(obs[m]).transpose().array();
    }
    return l;
}

} // namespace

BeliefSlice infer_states(const GenerativeModel& model, const Policy& policy,
                         const ObservationHistory& history,
                         const EngineConfig& config) {
    config.check();
    if (static_cast<int>(policy.size()) != model.shape.horizon) {
        throw InvalidInput("infer_states: policy length != horizon");
    }
    const int t = history.current_step();
    if (t < 1) {
        throw InvalidInput("infer_states: no observations yet");
    }
    if (static_cast<int>(history.committed_actions.size()) != t - 1) {
        throw InvalidInput("infer_states: need exactly one committed action "
                           "per completed step");
    }

    const int window = t + model.shape.horizon;
    const int n = model.shape.joint_states();

    // Action applied on the transition tau -> tau+1 (1-based timepoints).
    auto action_at = [&](int tau) {
        return tau < t ? history.committed_actions[tau - 1] : policy[tau - t];
    };

    std::vector<Matrix> trans(window); // trans[tau] moves tau -> tau+1
    for (int tau = 1; tau < window; ++tau) {
        trans[tau] = model.joint_transition(action_at(tau));
    }

    std::vector<Vector> likelihood(t + 1);
    for (int tau = 1; tau <= t; ++tau) {
        likelihood[tau] = joint_likelihood(model, history.observations[tau - 1]);
    }

    const Vector prior = model.joint_initial();
    std::vector<Vector> q(window + 1, Vector::Zero(n));
    std::vector<Vector> alpha(window + 1), beta_msg(window + 1);

    BeliefSlice slice;
    slice.current_step = t;
    bool converged = false;
    int iterations = 0;
    double delta = 0.0;

    while (iterations < config.state_max_iterations && !converged) {
        // forward pass: filtered (observed) / predictive (future) messages
        for (int tau = 1; tau <= window; ++tau) {
            Vector pred = tau == 1 ? prior : Vector(trans[tau - 1] * alpha[tau - 1]);
            if (tau <= t) {
                alpha[tau] = normalized_or_floored(
                    pred.cwiseProduct(likelihood[tau]), config.epsilon);
            } else {
                alpha[tau] = pred;
            }
        }
        // backward pass: evidence from later observations
        beta_msg[window] = Vector::Ones(n);
        for (int tau = window - 1; tau >= 1; --tau) {
            Vector incoming = beta_msg[tau + 1];
            if (tau + 1 <= t) incoming = incoming.cwiseProduct(likelihood[tau + 1]);
            beta_msg[tau] = normalized_or_floored(
                trans[tau].transpose() * incoming, config.epsilon);
        }

        delta = 0.0;
        for (int tau = 1; tau <= window; ++tau) {
            Vector updated = normalized_or_floored(
                alpha[tau].cwiseProduct(beta_msg[tau]), config.epsilon);
            delta = std::max(delta, (updated - q[tau]).cwiseAbs().maxCoeff());
            q[tau] = std::move(updated);
        }
        ++iterations;
        converged = delta < config.state_tolerance;
    }

    slice.converged = converged;
    slice.iterations = iterations;
    slice.final_delta = delta;
    slice.joint.assign(q.begin() + 1, q.end());
    slice.factor_marginals.resize(window);
    for (int tau = 0; tau < window; ++tau) {
        for (int f = 0; f < model.shape.num_factors(); ++f) {
            slice.factor_marginals[tau].push_back(
                model.marginalize(slice.joint[tau], f));
        }
    }
    return slice;
}

EfeEntry expected_free_energy(const GenerativeModel& model,
                              const BeliefSlice& beliefs, int current_step) {
    const int window = static_cast<int>(beliefs.joint.size());
    if (current_step < 1 || current_step >= window) {
        throw InvalidState("expected_free_energy: no future beliefs in slice");
    }

    EfeEntry entry;
    const int ctx_factor = model.preference_context_factor;
    for (int tau = current_step; tau < window; ++tau) { // 0-based: tau is future
        const Vector& q = beliefs.joint[tau];
        const Vector context = model.marginalize(q, ctx_factor);
        double risk_tau = 0.0;
        double ambiguity_tau = 0.0;
        for (int m = 0; m < model.shape.num_modalities(); ++m) {
            const Matrix& a = model.A.modality[m];
            const Vector predicted = a * q;
            const Vector preferred_log = model.C.modality[m] * context;
            risk_tau += kl_divergence(Categorical::from_weights(predicted),
                                      softmax(preferred_log));
            for (int j = 0; j < q.size(); ++j) {
                if (q[j] > 0.0) {
                    ambiguity_tau +=
                        q[j] * conditional_entropy_term(Categorical(a.col(j)));
                }
            }
        }
        entry.risk_per_timepoint.push_back(risk_tau);
        entry.ambiguity_per_timepoint.push_back(ambiguity_tau);
        entry.risk += risk_tau;
        entry.ambiguity += ambiguity_tau;
    }
    entry.total = entry.risk + entry.ambiguity;
    return entry;
}

Categorical policy_posterior(const EfeBreakdown& G, double gamma) {
    if (!(gamma > 0.0)) {
        throw InvalidInput("policy_posterior: gamma must be positive");
    }
    return softmax(-gamma * G.totals());
}

std::pair<double, PrecisionRecord> update_precision(const EfeBreakdown& G,
                                                    const EngineConfig& config) {
    config.check();
    const Vector g = G.totals();
    if (!g.allFinite()) {
        throw InvalidInput("update_precision: non-finite G");
    }
    int n_future = 1;
    for (const auto& e : G.per_policy) {
        n_future = std::max(n_future, e.future_timepoints());
    }
    const Vector pi0 = Vector::Constant(g.size(), 1.0 / static_cast<double>(g.size()));

    PrecisionRecord record;
    double beta = config.beta_prior;
    double gamma = 1.0 / beta;
    record.iterates.push_back(gamma);
    for (int i = 0; i < config.precision_iterations; ++i) {
        const Vector pi = softmax(-gamma * g).probs();
        // Expected free energy saved by the posterior relative to the flat
        // prior, per planned timepoint; always <= 0.
        const double evidence = (pi - pi0).dot(g) / static_cast<double>(n_future);
        const double beta_target = config.beta_prior * std::exp(evidence);
        beta = std::sqrt(beta * beta_target); // damped, in log space
        if (beta <= 1e-6) {
            beta = 1e-6;
            record.clamped = true;
        }
        const double next = 1.0 / beta;
        const double delta = std::abs(next - gamma);
        gamma = next;
        record.iterates.push_back(gamma);
        if (delta < config.precision_tolerance) break;
    }
    record.gamma = gamma;
    return {gamma, record};
}

int select_action(const Categorical& posterior, const std::vector<Policy>& policies) {
    if (static_cast<size_t>(posterior.size()) != policies.size()) {
        throw InvalidInput("select_action: posterior/policy length mismatch");
    }
    int num_actions = 0;
    for (const auto& p : policies) num_actions = std::max(num_actions, p.front() + 1);
    Vector marginal = Vector::Zero(num_actions);
    for (size_t i = 0; i < policies.size(); ++i) {
        marginal[policies[i].front()] += posterior[static_cast<Eigen::Index>(i)];
    }
    return static_cast<int>(argmax_lowest(marginal));
}

TrialEngine::TrialEngine(const GenerativeModel& model, EngineConfig config)
    : model_(&model), config_(config) {
    config_.check();
}

StepRecord TrialEngine::step(const ObservationVector& observation) {
    history_.observations.push_back(observation);
    const int t = history_.current_step();

    StepRecord record;
    record.observation = observation;

    EfeBreakdown efe;
    bool all_converged = true;
    for (size_t i = 0; i < model_->policies.size(); ++i) {
        const BeliefSlice slice =
            infer_states(*model_, model_->policies[i], history_, config_);
        all_converged = all_converged && slice.converged;
        efe.per_policy.push_back(expected_free_energy(*model_, slice, t));
        if (i == 0) {
            record.factor_posterior = slice.factor_marginals[t - 1];
        }
    }
    record.inference_converged = all_converged;
    record.efe = efe;

    auto [gamma, precision] = update_precision(efe, config_);
    precision.rate_of_change =
        previous_gamma_ ? gamma - *previous_gamma_ : gamma - 1.0 / config_.beta_prior;
    previous_gamma_ = gamma;
    record.precision = precision;

    const Categorical posterior = policy_posterior(efe, gamma);
    record.policy_posterior = posterior.probs();
    record.action = select_action(posterior, model_->policies);
    history_.committed_actions.push_back(record.action);
    return record;
}

} // namespace normact
