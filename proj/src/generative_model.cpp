#include "normact/generative_model.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace normact {

int ModelShape::joint_states() const {
    int n = 1;
    for (int s : states_per_factor) n *= s;
    return n;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& v : violations) os << v << "\n";
    return os.str();
}

int GenerativeModel::controllable_factor() const {
    for (int f = 0; f < static_cast<int>(B.factor.size()); ++f) {
        if (B.factor[f].size() > 1) return f;
    }
    return 0;
}

int GenerativeModel::joint_index(const std::vector<int>& states) const {
    int idx = 0;
    int stride = 1;
    for (int f = 0; f < shape.num_factors(); ++f) {
        idx += states[f] * stride;
        stride *= shape.states_per_factor[f];
    }
    return idx;
}

std::vector<int> GenerativeModel::unflatten(int joint) const {
    std::vector<int> states(shape.num_factors());
    for (int f = 0; f < shape.num_factors(); ++f) {
        states[f] = joint % shape.states_per_factor[f];
        joint /= shape.states_per_factor[f];
    }
    return states;
}

Matrix GenerativeModel::joint_transition(int action) const {
    const int control = controllable_factor();
    const int n = shape.joint_states();
    Matrix out = Matrix::Ones(n, n);
    // Product over factors of the per-factor transition entries.
    for (int to = 0; to < n; ++to) {
        const auto to_states = unflatten(to);
        for (int from = 0; from < n; ++from) {
            const auto from_states = unflatten(from);
            double p = 1.0;
            for (int f = 0; f < shape.num_factors(); ++f) {
                const int a = (f == control && B.factor[f].size() > 1) ? action : 0;
                p *= B.factor[f][a](to_states[f], from_states[f]);
            }
            out(to, from) = p;
        }
    }
    return out;
}

Vector GenerativeModel::joint_initial() const {
    const int n = shape.joint_states();
    Vector out(n);
    for (int j = 0; j < n; ++j) {
        const auto states = unflatten(j);
        double p = 1.0;
        for (int f = 0; f < shape.num_factors(); ++f) {
            p *= D.factor[f][states[f]];
        }
        out[j] = p;
    }
    return out;
}

Vector GenerativeModel::marginalize(const Vector& joint, int f) const {
    Vector out = Vector::Zero(shape.states_per_factor[f]);
    for (int j = 0; j < joint.size(); ++j) {
        out[unflatten(static_cast<int>(j))[f]] += joint[j];
    }
    return out;
}

namespace {

bool column_stochastic(const Matrix& m, int col, double tol = kCategoricalTol) {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const double p = m(r, col);
        if (!std::isfinite(p) || p < 0.0) return false;
        sum += p;
    }
    return std::abs(sum - 1.0) <= tol;
}

} // namespace

ValidationReport validate(const GenerativeModel& model) {
    ValidationReport report;
    auto add = [&](const std::string& s) { report.violations.push_back(s); };
    const auto& shape = model.shape;

    for (int s : shape.states_per_factor) {
        if (s < 1) add("shape: states_per_factor contains a count < 1");
    }
    for (int o : shape.outcomes_per_modality) {
        if (o < 1) add("shape: outcomes_per_modality contains a count < 1");
    }
    if (shape.num_factors() < 1) add("shape: no state factors");
    if (shape.num_modalities() < 1) add("shape: no observation modalities");
    if (shape.trial_length < 1) add("shape: trial_length < 1");
    if (shape.horizon < 1) add("shape: horizon < 1");
    if (shape.horizon > shape.trial_length) add("shape: horizon exceeds trial_length");
    if (!report.ok()) return report; // dimension checks below need a sane shape

    const int joint = shape.joint_states();

    if (static_cast<int>(model.A.modality.size()) != shape.num_modalities()) {
        add("A: modality count " + std::to_string(model.A.modality.size()) +
            " != shape " + std::to_string(shape.num_modalities()));
    } else {
        for (int m = 0; m < shape.num_modalities(); ++m) {
            const Matrix& a = model.A.modality[m];
            if (a.rows() != shape.outcomes_per_modality[m] || a.cols() != joint) {
                add("A[modality=" + std::to_string(m) + "]: is " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    ", expected " + std::to_string(shape.outcomes_per_modality[m]) +
                    "x" + std::to_string(joint));
                continue;
            }
            for (int c = 0; c < joint; ++c) {
                if (!column_stochastic(a, c)) {
                    add("A[modality=" + std::to_string(m) + "] column " +
                        std::to_string(c) + " is not a distribution");
                }
            }
        }
    }

    if (static_cast<int>(model.B.factor.size()) != shape.num_factors()) {
        add("B: factor count mismatch");
    } else {
        int controllable = 0;
        for (int f = 0; f < shape.num_factors(); ++f) {
            if (model.B.factor[f].empty()) {
                add("B[factor=" + std::to_string(f) + "]: no action matrices");
                continue;
            }
            if (model.B.factor[f].size() > 1) ++controllable;
            const int n = shape.states_per_factor[f];
            for (int a = 0; a < model.B.num_actions(f); ++a) {
                const Matrix& b = model.B.factor[f][a];
                if (b.rows() != n || b.cols() != n) {
                    add("B[factor=" + std::to_string(f) + "][action=" +
                        std::to_string(a) + "]: wrong dimensions");
                    continue;
                }
                for (int c = 0; c < n; ++c) {
                    if (!column_stochastic(b, c)) {
                        add("B[factor=" + std::to_string(f) + "][action=" +
                            std::to_string(a) + "] column " + std::to_string(c) +
                            " is not a distribution");
                    }
                }
            }
        }
        if (controllable > 1) {
            add("B: more than one factor carries multiple action matrices");
        }
    }

    if (model.preference_context_factor < 0 ||
        model.preference_context_factor >= shape.num_factors()) {
        add("C: preference_context_factor out of range");
    } else if (static_cast<int>(model.C.modality.size()) != shape.num_modalities()) {
        add("C: modality count mismatch");
    } else {
        const int ctx = shape.states_per_factor[model.preference_context_factor];
        bool any_nonconstant = false;
        for (int m = 0; m < shape.num_modalities(); ++m) {
            const Matrix& c = model.C.modality[m];
            if (c.rows() != shape.outcomes_per_modality[m] || c.cols() != ctx) {
                add("C[modality=" + std::to_string(m) + "]: wrong dimensions");
                continue;
            }
            if (!c.allFinite()) {
                add("C[modality=" + std::to_string(m) + "]: non-finite entry");
            }
            if (c.rows() > 0 && (c.maxCoeff() - c.minCoeff()) > 0.0) {
                any_nonconstant = true;
            }
        }
        if (!any_nonconstant) {
            add("C: all modalities constant; preferences cannot drive behavior");
        }
    }

    if (static_cast<int>(model.D.factor.size()) != shape.num_factors()) {
        add("D: factor count mismatch");
    } else {
        for (int f = 0; f < shape.num_factors(); ++f) {
            const Vector& d = model.D.factor[f];
            if (d.size() != shape.states_per_factor[f]) {
                add("D[factor=" + std::to_string(f) + "]: wrong length");
                continue;
            }
            double sum = 0.0;
            bool bad = false;
            for (Eigen::Index i = 0; i < d.size(); ++i) {
                if (!std::isfinite(d[i]) || d[i] < 0.0) bad = true;
                sum += d[i];
            }
            if (bad || std::abs(sum - 1.0) > kCategoricalTol) {
                add("D[factor=" + std::to_string(f) + "]: not a distribution");
            }
        }
    }

    if (model.policies.empty()) {
        add("policies: empty");
    } else {
        std::set<Policy> seen;
        const int control = model.controllable_factor();
        const int num_actions =
            model.B.factor.empty() ? 0 : model.B.num_actions(control);
        for (const auto& p : model.policies) {
            if (static_cast<int>(p.size()) != shape.horizon) {
                add("policies: a policy has length != horizon");
            }
            for (int a : p) {
                if (a < 0 || a >= num_actions) {
                    add("policies: action index " + std::to_string(a) +
                        " out of range");
                }
            }
            if (!seen.insert(p).second) add("policies: duplicate policy");
        }
    }

    return report;
}

std::vector<Policy> enumerate_policies(int num_actions, int horizon, long cap) {
    if (num_actions < 1 || horizon < 1) {
        throw InvalidInput("enumerate_policies: num_actions and horizon must be >= 1");
    }
    long count = 1;
    for (int i = 0; i < horizon; ++i) {
        count *= num_actions;
        if (count > cap) {
            throw CapacityError("enumerate_policies: " +
                                std::to_string(num_actions) + "^" +
                                std::to_string(horizon) + " exceeds cap " +
                                std::to_string(cap));
        }
    }
    std::vector<Policy> out;
    out.reserve(static_cast<size_t>(count));
    Policy current(horizon, 0);
    for (long i = 0; i < count; ++i) {
        out.push_back(current);
        // lexicographic odometer, last position fastest
        for (int pos = horizon - 1; pos >= 0; --pos) {
            if (++current[pos] < num_actions) break;
            current[pos] = 0;
        }
    }
    return out;
}

} // namespace normact
