#include "normact/belief_math.hpp"

#include <cmath>
#include <string>

namespace normact {

Categorical::Categorical(Vector probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0) {
        throw InvalidInput("Categorical: empty probability vector");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
        const double p = probs_[i];
        if (!std::isfinite(p) || p < 0.0) {
            throw InvalidInput("Categorical: entry " + std::to_string(i) +
                               " is negative or non-finite");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kCategoricalTol) {
        throw InvalidInput("Categorical: entries sum to " + std::to_string(sum));
    }
}

Categorical Categorical::from_weights(const Vector& weights) {
    if (weights.size() == 0) {
        throw InvalidInput("Categorical::from_weights: empty vector");
    }
    const double sum = weights.sum();
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw DegenerateDistribution("Categorical::from_weights: weights sum to " +
                                     std::to_string(sum));
    }
    return Categorical(weights / sum);
}

Categorical Categorical::uniform(Eigen::Index n) {
    return Categorical(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

Categorical Categorical::delta(Eigen::Index n, Eigen::Index index) {
    Vector v = Vector::Zero(n);
    v[index] = 1.0;
    return Categorical(std::move(v));
}

Categorical softmax(const Vector& v) {
    if (v.size() == 0) {
        throw InvalidInput("softmax: empty vector");
    }
    if (!v.allFinite()) {
        throw InvalidInput("softmax: non-finite entry");
    }
    const Vector shifted = v.array() - v.maxCoeff();
    const Vector e = shifted.array().exp();
    return Categorical(e / e.sum());
}

Matrix normalize_columns(const Matrix& m) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double sum = m.col(c).sum();
        if (!(sum > 0.0)) {
            throw DegenerateDistribution("normalize_columns: column " +
                                         std::to_string(c) + " has zero sum");
        }
        out.col(c) = m.col(c) / sum;
    }
    return out;
}

double kl_divergence(const Categorical& p, const Categorical& q) {
    if (p.size() != q.size()) {
        throw InvalidInput("kl_divergence: length mismatch");
    }
    double d = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            d += p[i] * (floored_log(p[i]) - floored_log(q[i]));
        }
    }
    return std::max(d, 0.0);
}

double conditional_entropy_term(const Categorical& likelihood_column) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < likelihood_column.size(); ++i) {
        const double a = likelihood_column[i];
        if (a > 0.0) {
            h -= a * floored_log(a);
        }
    }
    return std::max(h, 0.0);
}

Eigen::Index argmax_lowest(const Vector& v) {
    if (v.size() == 0) {
        throw InvalidInput("argmax_lowest: empty vector");
    }
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) {
            best = i;
        }
    }
    return best;
}

} // namespace normact
