#ifndef QSG_SNAPSHOT_HPP
#define QSG_SNAPSHOT_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "qsg/errors.hpp"
#include "qsg/finite_sg.hpp"
#include "qsg/value_iteration.hpp"

namespace qsg {

// Snapshots let solving and simulating run as separate invocations: the
// finite SG and the solve result are written as JSON keyed by the model's
// provenance hash, and loads refuse to pair with a mismatched model.

inline nlohmann::json finite_sg_to_json(const FiniteSG& sg) {
    nlohmann::json j;
    j["format"] = "qsg-finite-sg-v1";
    j["provenance"] = sg.provenance;
    j["num_states"] = sg.num_states;
    j["a_actions"] = sg.a_actions;
    j["gamma"] = sg.gamma;
    j["tau"] = sg.tau;
    j["alpha"] = sg.alpha;
    j["q0"] = sg.q0;
    j["intervals"] = sg.intervals;
    j["zero_sum"] = sg.zero_sum;
    j["rewards"] = sg.rewards;
    j["row_ptr"] = sg.row_ptr;
    j["next_state"] = sg.next_state;
    j["prob"] = sg.prob;
    return j;
}

inline FiniteSG finite_sg_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "qsg-finite-sg-v1")
        throw ConfigError("finite SG snapshot: unknown format");
    FiniteSG sg;
    sg.provenance = j.at("provenance").get<std::uint64_t>();
    sg.num_states = j.at("num_states").get<std::size_t>();
    sg.a_actions = j.at("a_actions").get<std::vector<int>>();
    sg.num_joint_a = 1;
    for (int k : sg.a_actions) sg.num_joint_a *= k;
    sg.gamma = j.at("gamma").get<double>();
    sg.tau = j.value("tau", 0.0);
    sg.alpha = j.value("alpha", 0.0);
    sg.q0 = j.value("q0", 0.0);
    sg.intervals = j.value("intervals", 0);
    sg.zero_sum = j.at("zero_sum").get<bool>();
    sg.rewards = j.at("rewards").get<std::vector<std::vector<double>>>();
    sg.row_ptr = j.at("row_ptr").get<std::vector<std::size_t>>();
    sg.next_state = j.at("next_state").get<std::vector<std::uint32_t>>();
    sg.prob = j.at("prob").get<std::vector<double>>();
    return sg;
}

inline nlohmann::json solve_result_to_json(const SolveResult& res) {
    nlohmann::json j;
    j["format"] = "qsg-solve-v1";
    j["provenance"] = res.provenance;
    j["kind"] = res.kind == SolveResult::Kind::Mdp ? "mdp" : "minimax";
    j["gamma"] = res.gamma;
    j["values"] = res.values;
    j["policies"] = res.policies;
    j["iterations"] = res.iterations;
    j["residual"] = res.residual;
    j["converged"] = res.converged;
    j["residual_history"] = res.residual_history;
    return j;
}

inline SolveResult solve_result_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "qsg-solve-v1")
        throw ConfigError("solve snapshot: unknown format");
    SolveResult res;
    res.provenance = j.at("provenance").get<std::uint64_t>();
    res.kind = j.at("kind").get<std::string>() == "mdp" ? SolveResult::Kind::Mdp
                                                        : SolveResult::Kind::Minimax;
    res.gamma = j.at("gamma").get<double>();
    res.values = j.at("values").get<std::vector<double>>();
    res.policies = j.at("policies").get<std::vector<std::vector<double>>>();
    res.iterations = j.at("iterations").get<int>();
    res.residual = j.at("residual").get<double>();
    res.converged = j.at("converged").get<bool>();
    res.residual_history = j.at("residual_history").get<std::vector<double>>();
    return res;
}

inline void save_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << j.dump();
    out << "\n";
}

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

inline void save_finite_sg(const FiniteSG& sg, const std::string& path) {
    save_json(finite_sg_to_json(sg), path);
}
inline FiniteSG load_finite_sg(const std::string& path) {
    return finite_sg_from_json(load_json(path));
}
inline void save_solve_result(const SolveResult& res, const std::string& path) {
    save_json(solve_result_to_json(res), path);
}
// Loads a solve snapshot and verifies it was computed for the given model.
inline SolveResult load_solve_result(const std::string& path, std::uint64_t expected_provenance) {
    SolveResult res = solve_result_from_json(load_json(path));
    if (res.provenance != expected_provenance)
        throw ProvenanceError("solve snapshot " + path +
                              " was computed for a different game/grid/parameter combination");
    return res;
}

} // namespace qsg

#endif // QSG_SNAPSHOT_HPP
