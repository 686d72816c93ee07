#ifndef NORMACT_GENERATIVE_MODEL_HPP
#define NORMACT_GENERATIVE_MODEL_HPP

#include <string>
#include <vector>

#include "normact/belief_math.hpp"

namespace normact {

/// Dimensions of the factorized POMDP.
struct ModelShape {
    std::vector<int> states_per_factor;
    std::vector<int> outcomes_per_modality;
    int trial_length = 0; // T, decision steps per trial
    int horizon = 0;      // H, planning depth in steps

    int num_factors() const { return static_cast<int>(states_per_factor.size()); }
    int num_modalities() const { return static_cast<int>(outcomes_per_modality.size()); }
    /// Product of the per-factor state counts.
    int joint_states() const;
};

/// Per-modality P(outcome | joint hidden state). Each matrix is
/// (outcomes x joint_states); joint states are indexed with factor 0 fastest.
struct LikelihoodTensor {
    std::vector<Matrix> modality;
};

/// Per-factor, per-action column-stochastic transition matrices
/// (next_state x current_state). Uncontrolled factors carry one matrix.
struct TransitionSet {
    std::vector<std::vector<Matrix>> factor;

    int num_actions(int f) const { return static_cast<int>(factor[f].size()); }
};

/// Per-modality log-preferences over outcomes, conditioned on the states of
/// one context factor. Each matrix is (outcomes x context_states); additive,
/// in nats, larger = more preferred.
struct PreferenceTensor {
    std::vector<Matrix> modality;
};

/// Per-factor prior over states at trial start.
struct InitialStateVector {
    std::vector<Vector> factor;
};

/// A sequence of action indices for the controllable factor, length = horizon.
using Policy = std::vector<int>;

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

struct GenerativeModel {
    ModelShape shape;
    LikelihoodTensor A;
    TransitionSet B;
    PreferenceTensor C;
    InitialStateVector D;
    std::vector<Policy> policies;
    /// Factor whose states condition the preference tensor columns.
    int preference_context_factor = 0;

    /// The unique factor with more than one action matrix, or 0 if none.
    int controllable_factor() const;
    int num_actions() const { return B.num_actions(controllable_factor()); }

    /// Flattened joint-state index, factor 0 fastest.
    int joint_index(const std::vector<int>& states) const;
    std::vector<int> unflatten(int joint) const;

    /// Joint-space transition matrix for one controllable-factor action
    /// (uncontrolled factors use their single matrix).
    Matrix joint_transition(int action) const;
    /// Joint-space prior from the factorized D.
    Vector joint_initial() const;
    /// Marginalizes a joint-space distribution onto one factor.
    Vector marginalize(const Vector& joint, int f) const;
};

/// Structural validation: dimensions, column stochasticity, policy set.
/// Report-style; never throws.
ValidationReport validate(const GenerativeModel& model);

/// All num_actions^horizon action sequences in lexicographic order.
/// Throws CapacityError when the product exceeds cap.
std::vector<Policy> enumerate_policies(int num_actions, int horizon, long cap = 4096);

} // namespace normact

#endif
