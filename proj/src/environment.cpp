#include "normact/environment.hpp"

#include <sstream>

namespace normact {

namespace {

constexpr int kTrialLength = 10;

// True location dynamics: stay keeps the lane, steer advances 1->2->3->4
// and bounces 4->3. 0-based.
int advance_location(int location, int action) {
    if (action == 0) return location;
    return location < 3 ? location + 1 : 2;
}

std::vector<int> repeat(int a, int na, int b, int nb) {
    std::vector<int> v;
    v.insert(v.end(), na, a);
    v.insert(v.end(), nb, b);
    return v;
}

} // namespace

WorldState WorldState::make(bool deterministic, std::uint64_t seed) {
    WorldState w;
    w.deterministic = deterministic;
    w.rng.seed(seed);
    return w;
}

ConditionScript build_condition(int id) {
    std::vector<int> c1, c2;
    switch (id) {
        case 1: c1 = repeat(0, 10, 0, 0); c2 = repeat(0, 10, 0, 0); break;
        case 2: c1 = repeat(0, 10, 0, 0); c2 = repeat(1, 10, 0, 0); break;
        case 3: c1 = repeat(1, 10, 0, 0); c2 = repeat(0, 10, 0, 0); break;
        case 4: c1 = repeat(1, 10, 0, 0); c2 = repeat(1, 10, 0, 0); break;
        case 5: c1 = repeat(0, 6, 1, 4);  c2 = repeat(0, 10, 0, 0); break;
        case 6: c1 = repeat(0, 6, 1, 4);  c2 = repeat(1, 10, 0, 0); break;
        case 7: c1 = repeat(0, 6, 1, 4);  c2 = repeat(0, 3, 1, 7);  break;
        default:
            throw InvalidInput("build_condition: id " + std::to_string(id) +
                               " out of range 1..7");
    }
    ConditionScript script;
    script.id = id;
    for (int v : c1) script.context1.push_back(static_cast<LineContext>(v));
    for (int v : c2) script.context2.push_back(static_cast<EmergencyContext>(v));
    return script;
}

std::string script_to_json(const ConditionScript& script) {
    std::ostringstream os;
    os << "{\"id\":" << script.id << ",\"context1\":[";
    for (size_t i = 0; i < script.context1.size(); ++i) {
        os << (i ? "," : "")
           << (script.context1[i] == LineContext::Stay ? "\"stay\"" : "\"cross\"");
    }
    os << "],\"context2\":[";
    for (size_t i = 0; i < script.context2.size(); ++i) {
        os << (i ? "," : "")
           << (script.context2[i] == EmergencyContext::Normal ? "\"normal\""
                                                              : "\"emergency\"");
    }
    os << "]}";
    return os.str();
}

ObservationVector observe(WorldState& world, const ConditionScript& script,
                          const GenerativeModel& process_model) {
    const int t = world.step;
    const std::vector<int> true_states = {
        world.true_location,
        static_cast<int>(script.context1[t - 1]),
        static_cast<int>(script.context2[t - 1])};
    const int joint = process_model.joint_index(true_states);

    ObservationVector obs;
    obs.reserve(process_model.A.modality.size());
    for (const Matrix& a : process_model.A.modality) {
        const Vector col = a.col(joint);
        if (world.deterministic) {
            obs.push_back(static_cast<int>(argmax_lowest(col)));
        } else {
            std::discrete_distribution<int> dist(col.data(), col.data() + col.size());
            obs.push_back(dist(world.rng));
        }
    }
    return obs;
}

ObservationVector env_step(WorldState& world, const ConditionScript& script,
                           int action, const GenerativeModel& process_model) {
    if (world.step >= kTrialLength) {
        throw TrialComplete("env_step: trial already at step " +
                            std::to_string(world.step));
    }
    if (action < 0 || action >= process_model.num_actions()) {
        throw InvalidInput("env_step: action out of range");
    }
    world.true_location = advance_location(world.true_location, action);
    world.step += 1;
    return observe(world, script, process_model);
}

} // namespace normact
