#ifndef NORMACT_MODEL_IO_HPP
#define NORMACT_MODEL_IO_HPP

#include <string>

#include "normact/generative_model.hpp"

namespace normact {

/// Model-spec JSON: top-level keys `shape`, `A`, `B`, `C`, `D`,
/// `policy_horizon` (and optional `preference_context_factor`, defaulting to
/// the last factor). Tensors are nested arrays: A[modality][outcome][joint],
/// B[factor][action][next][current], C[modality][outcome][context],
/// D[factor][state].
std::string model_to_json(const GenerativeModel& model);

/// Parses and validates; throws InvalidInput on parse failure or a model
/// that fails validate().
GenerativeModel model_from_json(const std::string& text);

GenerativeModel load_model(const std::string& path);
void save_model(const GenerativeModel& model, const std::string& path);

} // namespace normact

#endif
