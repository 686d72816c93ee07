#ifndef NORMACT_INFERENCE_HPP
#define NORMACT_INFERENCE_HPP

#include <optional>
#include <vector>

#include "normact/environment.hpp"
#include "normact/generative_model.hpp"

namespace normact {

struct EngineConfig {
    int state_max_iterations = 16;
    double state_tolerance = 1e-4;     // max-abs belief change per sweep
    double beta_prior = 1.0;           // beta_0; gamma prior is 1/beta_0
    int precision_iterations = 16;
    double precision_tolerance = 1e-6;
    double epsilon = kEpsilon;

    void check() const;
};

/// Everything the engine has seen and done so far in one trial.
struct ObservationHistory {
    std::vector<ObservationVector> observations; // one per step, oldest first
    std::vector<int> committed_actions;          // actions already taken

    int current_step() const { return static_cast<int>(observations.size()); }
};

/// Posterior over states for one policy: joint and per-factor marginals for
/// every timepoint in the inference window (observed steps plus the policy's
/// planning horizon), with convergence metadata.
struct BeliefSlice {
    std::vector<Vector> joint;                        // per timepoint
    std::vector<std::vector<Vector>> factor_marginals; // [timepoint][factor]
    int current_step = 0; // timepoints beyond this are predictive
    bool converged = false;
    int iterations = 0;
    double final_delta = 0.0;
};

/// Expected free energy of one policy, decomposed into risk and ambiguity.
struct EfeEntry {
    double total = 0.0;
    double risk = 0.0;
    double ambiguity = 0.0;
    std::vector<double> risk_per_timepoint;
    std::vector<double> ambiguity_per_timepoint;

    int future_timepoints() const {
        return static_cast<int>(risk_per_timepoint.size());
    }
};

struct EfeBreakdown {
    std::vector<EfeEntry> per_policy;

    Vector totals() const;
};

/// One step of the precision fixed point: converged gamma plus the iterates.
struct PrecisionRecord {
    double gamma = 0.0;
    double rate_of_change = 0.0; // vs the previous trial step
    std::vector<double> iterates;
    bool clamped = false;
};

/// State inference for one policy given the observations received so far.
/// Exact forward-backward filtering/smoothing on the joint state space,
/// iterated as full sweeps until the beliefs stop changing; future timepoints
/// carry predictive (transition-only) messages.
BeliefSlice infer_states(const GenerativeModel& model, const Policy& policy,
                         const ObservationHistory& history,
                         const EngineConfig& config);

/// Risk + ambiguity over the policy's future timepoints. Risk is the KL from
/// the predictive outcome distribution to the preferred outcome distribution
/// (softmax of the C columns mixed by the predicted context belief);
/// ambiguity is the expected conditional outcome entropy under the state
/// beliefs. Throws InvalidState when the slice has no future beliefs.
EfeEntry expected_free_energy(const GenerativeModel& model,
                              const BeliefSlice& beliefs, int current_step);

/// softmax(-gamma * G) over policies.
Categorical policy_posterior(const EfeBreakdown& G, double gamma);

/// Fixed point for the policy precision gamma in beta space: the posterior
/// over policies is compared against the uniform prior, and the expected
/// free energy saved by the posterior (per future timepoint) lowers beta
/// below its prior beta_0. Equal G across policies gives gamma = 1/beta_0
/// exactly.
std::pair<double, PrecisionRecord> update_precision(const EfeBreakdown& G,
                                                    const EngineConfig& config);

/// Marginal probability of each first-step action under the policy
/// posterior; returns the argmax, ties to the lowest action index.
int select_action(const Categorical& posterior, const std::vector<Policy>& policies);

/// Full per-step record emitted by the engine.
struct StepRecord {
    ObservationVector observation;
    std::vector<Vector> factor_posterior; // current-step marginals
    Vector policy_posterior;
    EfeBreakdown efe;
    PrecisionRecord precision;
    int action = 0;
    bool inference_converged = true;
};

/// Perception-action cycle for one trial. Strictly sequential; instantiate
/// one engine per trial, the shared model is never mutated.
class TrialEngine {
public:
    TrialEngine(const GenerativeModel& model, EngineConfig config);

    /// Runs state inference, EFE, precision, and action selection for one
    /// new observation; commits the selected action to the history.
    StepRecord step(const ObservationVector& observation);

    const ObservationHistory& history() const { return history_; }

private:
    const GenerativeModel* model_;
    EngineConfig config_;
    ObservationHistory history_;
    std::optional<double> previous_gamma_;
};

} // namespace normact

#endif
