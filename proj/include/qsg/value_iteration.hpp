#ifndef QSG_VALUE_ITERATION_HPP
#define QSG_VALUE_ITERATION_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsg/finite_sg.hpp"
#include "qsg/matrix_game.hpp"

namespace qsg {

struct SolveOptions {
    double tolerance = 1e-8; // sup-norm stopping threshold
    int max_iters = 10000;
    int record_snapshots = 0; // keep the first k finite-horizon value sweeps
};

struct SolveResult {
    enum class Kind { Mdp, Minimax };
    Kind kind = Kind::Mdp;
    std::vector<double> values; // per state, first A-type's perspective
    // per A-type: state-by-state mixed strategy, [state * |A^j| + a]
    std::vector<std::vector<double>> policies;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> residual_history;            // sup-norm change per sweep
    std::vector<std::vector<double>> value_snapshots; // v_0, v_1, ... while recorded
    double gamma = 0.0;
    std::uint64_t provenance = 0;
};

namespace detail {

// Q_kappa(d, a) = r(d, a) + gamma * sum_d' p(d'|d,a) v(d'), for all joint a.
inline void stage_values(const FiniteSG& sg, std::size_t d, const std::vector<double>& v,
                         std::vector<double>& out) {
    out.resize(sg.num_joint_a);
    for (int ja = 0; ja < sg.num_joint_a; ++ja) {
        double q = sg.rewards[0][sg.row_index(d, ja)];
        const auto [b, e] = sg.row_range(d, ja);
        double ev = 0.0;
        for (std::size_t k = b; k < e; ++k) ev += sg.prob[k] * v[sg.next_state[k]];
        out[ja] = q + sg.gamma * ev;
    }
}

} // namespace detail

// Minimax value iteration for two strategic agents with opposite rewards:
// each sweep solves the stage matrix game at every state from the previous
// sweep's values (Jacobi order, so sweeps are order-independent). Starts
// from v == 0, making sweep kappa equal the optimal value of a
// (kappa+1)-stage horizon.
inline SolveResult minimax_value_iteration(const FiniteSG& sg, const SolveOptions& opts = {}) {
    if (sg.num_a_types() != 2 || !sg.zero_sum)
        throw std::invalid_argument(
            "minimax_value_iteration: needs exactly two A-types with zero-sum rewards");
    const int ra = sg.a_actions[0];
    const int ca = sg.a_actions[1];

    SolveResult res;
    res.kind = SolveResult::Kind::Minimax;
    res.gamma = sg.gamma;
    res.provenance = sg.provenance;
    std::vector<double> v(sg.num_states, 0.0), vn(sg.num_states, 0.0);
    std::vector<double> stage;

    for (int it = 0; it < opts.max_iters; ++it) {
        double diff = 0.0;
        for (std::size_t d = 0; d < sg.num_states; ++d) {
            detail::stage_values(sg, d, v, stage);
            vn[d] = solve_matrix_game(stage, ra, ca).value;
            diff = std::max(diff, std::abs(vn[d] - v[d]));
        }
        std::swap(v, vn);
        res.residual_history.push_back(diff);
        res.iterations = it + 1;
        res.residual = diff;
        if (it < opts.record_snapshots) res.value_snapshots.push_back(v);
        if (diff <= opts.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.values = v;

    // equilibrium decision rules from the converged stage games
    res.policies.assign(2, std::vector<double>());
    res.policies[0].resize(sg.num_states * static_cast<std::size_t>(ra));
    res.policies[1].resize(sg.num_states * static_cast<std::size_t>(ca));
    for (std::size_t d = 0; d < sg.num_states; ++d) {
        detail::stage_values(sg, d, v, stage);
        const MatrixGameSolution sol = solve_matrix_game(stage, ra, ca);
        for (int a = 0; a < ra; ++a) res.policies[0][d * ra + a] = sol.row_strategy[a];
        for (int a = 0; a < ca; ++a) res.policies[1][d * ca + a] = sol.col_strategy[a];
    }
    return res;
}

// Standard Bellman iteration for a single strategic agent; greedy action
// ties break toward the lowest index.
inline SolveResult mdp_value_iteration(const FiniteSG& sg, const SolveOptions& opts = {}) {
    if (sg.num_a_types() != 1)
        throw std::invalid_argument("mdp_value_iteration: needs exactly one A-type");
    const int na = sg.num_joint_a;

    SolveResult res;
    res.kind = SolveResult::Kind::Mdp;
    res.gamma = sg.gamma;
    res.provenance = sg.provenance;
    std::vector<double> v(sg.num_states, 0.0), vn(sg.num_states, 0.0);
    std::vector<double> stage;

    for (int it = 0; it < opts.max_iters; ++it) {
        double diff = 0.0;
        for (std::size_t d = 0; d < sg.num_states; ++d) {
            detail::stage_values(sg, d, v, stage);
            vn[d] = *std::max_element(stage.begin(), stage.end());
            diff = std::max(diff, std::abs(vn[d] - v[d]));
        }
        std::swap(v, vn);
        res.residual_history.push_back(diff);
        res.iterations = it + 1;
        res.residual = diff;
        if (it < opts.record_snapshots) res.value_snapshots.push_back(v);
        if (diff <= opts.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.values = v;

    res.policies.assign(1, std::vector<double>(sg.num_states * static_cast<std::size_t>(na), 0.0));
    for (std::size_t d = 0; d < sg.num_states; ++d) {
        detail::stage_values(sg, d, v, stage);
        int best = 0;
        for (int a = 1; a < na; ++a)
            if (stage[a] > stage[best]) best = a;
        res.policies[0][d * na + best] = 1.0;
    }
    return res;
}

// Per-state decision rules for the simulation harness; refuses results
// that never reached the stopping threshold.
inline const std::vector<std::vector<double>>& extract_stationary_policy(const SolveResult& res) {
    if (!res.converged)
        throw std::runtime_error(
            "extract_stationary_policy: solve did not converge (residual " +
            std::to_string(res.residual) + " after " + std::to_string(res.iterations) +
            " iterations)");
    return res.policies;
}

} // namespace qsg

#endif // QSG_VALUE_ITERATION_HPP
