#ifndef NORMACT_BELIEF_MATH_HPP
#define NORMACT_BELIEF_MATH_HPP

#include <Eigen/Core>

#include "normact/errors.hpp"

namespace normact {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Floor applied inside every logarithm so deterministic mappings stay finite.
inline constexpr double kEpsilon = 1e-16;

/// Tolerance for "sums to 1" checks on categorical distributions.
inline constexpr double kCategoricalTol = 1e-9;

inline double floored_log(double x) { return std::log(std::max(x, kEpsilon)); }

/// A categorical distribution over a finite set of states. Thin wrapper over
/// an Eigen vector; construction validates non-negativity and normalization.
class Categorical {
public:
    explicit Categorical(Vector probs);

    /// Normalizes an arbitrary non-negative weight vector.
    static Categorical from_weights(const Vector& weights);

    static Categorical uniform(Eigen::Index n);
    static Categorical delta(Eigen::Index n, Eigen::Index index);

    const Vector& probs() const { return probs_; }
    Eigen::Index size() const { return probs_.size(); }
    double operator[](Eigen::Index i) const { return probs_[i]; }

private:
    Vector probs_;
};

/// Numerically stable softmax (max-subtraction). Throws InvalidInput on an
/// empty or non-finite input.
Categorical softmax(const Vector& v);

/// Rescales each column of m to sum to 1. Throws DegenerateDistribution
/// naming the first zero-sum column.
Matrix normalize_columns(const Matrix& m);

/// KL(p || q) in nats, epsilon-floored. Throws InvalidInput on length mismatch.
double kl_divergence(const Categorical& p, const Categorical& q);

/// Shannon entropy -sum a ln a of a likelihood column, in nats.
double conditional_entropy_term(const Categorical& likelihood_column);

/// Index of the largest entry; ties resolve to the lowest index.
Eigen::Index argmax_lowest(const Vector& v);

} // namespace normact

#endif
