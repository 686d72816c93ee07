#ifndef NORMACT_ERRORS_HPP
#define NORMACT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace normact {

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A distribution that cannot be normalized (e.g. zero-sum column).
struct DegenerateDistribution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidState : std::logic_error {
    using std::logic_error::logic_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrialComplete : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace normact

#endif
