#include "normact/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace normact {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw InvalidInput("model json: empty matrix");
    Matrix m(rows.size(), rows[0].size());
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) {
            throw InvalidInput("model json: ragged matrix");
        }
        for (size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

} // namespace

std::string model_to_json(const GenerativeModel& model) {
    json a = json::array();
    for (const Matrix& m : model.A.modality) a.push_back(matrix_to_json(m));
    json b = json::array();
    for (const auto& actions : model.B.factor) {
        json per_action = json::array();
        for (const Matrix& m : actions) per_action.push_back(matrix_to_json(m));
        b.push_back(std::move(per_action));
    }
    json c = json::array();
    for (const Matrix& m : model.C.modality) c.push_back(matrix_to_json(m));
    json d = json::array();
    for (const Vector& v : model.D.factor) {
        d.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    }
    const json doc{
        {"shape",
         {{"states_per_factor", model.shape.states_per_factor},
          {"outcomes_per_modality", model.shape.outcomes_per_modality},
          {"trial_length", model.shape.trial_length}}},
        {"A", a},
        {"B", b},
        {"C", c},
        {"D", d},
        {"policy_horizon", model.shape.horizon},
        {"preference_context_factor", model.preference_context_factor}};
    return doc.dump(2) + "\n";
}

GenerativeModel model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("model json: parse failure: ") + e.what());
    }
    GenerativeModel model;
    try {
        const json& shape = doc.at("shape");
        model.shape.states_per_factor = shape.at("states_per_factor").get<std::vector<int>>();
        model.shape.outcomes_per_modality =
            shape.at("outcomes_per_modality").get<std::vector<int>>();
        model.shape.trial_length = shape.at("trial_length");
        model.shape.horizon = doc.at("policy_horizon");
        model.preference_context_factor =
            doc.value("preference_context_factor", model.shape.num_factors() - 1);
        for (const json& j : doc.at("A")) model.A.modality.push_back(matrix_from_json(j));
        for (const json& factor : doc.at("B")) {
            std::vector<Matrix> actions;
            for (const json& j : factor) actions.push_back(matrix_from_json(j));
            model.B.factor.push_back(std::move(actions));
        }
        for (const json& j : doc.at("C")) model.C.modality.push_back(matrix_from_json(j));
        for (const json& j : doc.at("D")) {
            const auto v = j.get<std::vector<double>>();
            model.D.factor.push_back(
                Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
        }
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("model json: ") + e.what());
    }
    model.policies =
        enumerate_policies(model.B.num_actions(model.controllable_factor()),
                           model.shape.horizon);
    const auto report = validate(model);
    if (!report.ok()) {
        throw InvalidInput("model json failed validation:\n" + report.to_string());
    }
    return model;
}

GenerativeModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

void save_model(const GenerativeModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file: " + path);
    out << model_to_json(model);
}

} // namespace normact
