#ifndef QSG_BRUTE_FORCE_HPP
#define QSG_BRUTE_FORCE_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsg/finite_sg.hpp"
#include "qsg/matrix_game.hpp"

namespace qsg {

constexpr double kBruteForceBudget = 1e7;

namespace detail {

inline void check_budget(double per_level, int horizon) {
    const double nodes = std::pow(per_level, horizon);
    if (nodes > kBruteForceBudget)
        throw std::runtime_error("brute_force_finite_horizon_value: branching budget exceeded, "
                                 "would visit ~" +
                                 std::to_string(nodes) + " nodes (budget " +
                                 std::to_string(kBruteForceBudget) + ")");
}

// stage value from explicitly enumerated joint-action values: matrix game
// for a zero-sum pair, plain max for a single agent
inline double stage_optimum(const std::vector<double>& q, const std::vector<int>& a_actions,
                            bool zero_sum) {
    if (a_actions.size() == 2 && zero_sum)
        return solve_matrix_game(q, a_actions[0], a_actions[1]).value;
    double best = q[0];
    for (double x : q) best = std::max(best, x);
    return best;
}

inline double finite_tree_value(const FiniteSG& sg, std::size_t state, int horizon) {
    std::vector<double> q(sg.num_joint_a);
    for (int ja = 0; ja < sg.num_joint_a; ++ja) {
        double ev = 0.0;
        if (horizon > 0) {
            const auto [b, e] = sg.row_range(state, ja);
            for (std::size_t k = b; k < e; ++k)
                ev += sg.prob[k] * finite_tree_value(sg, sg.next_state[k], horizon - 1);
        }
        q[ja] = sg.rewards[0][sg.row_index(state, ja)] + sg.gamma * ev;
    }
    return stage_optimum(q, sg.a_actions, sg.zero_sum);
}

inline double continuum_tree_value(const NormalFormGame& game, const LearnerParams& params,
                                   double gamma, const QState& z, int horizon) {
    const std::vector<double> pi = joint_policy(game, z, params.tau);
    std::vector<double> q(game.num_joint_a());
    for (int ja = 0; ja < game.num_joint_a(); ++ja) {
        double stage = 0.0;
        double ev = 0.0;
        for (int jb = 0; jb < game.num_joint_b(); ++jb) {
            stage += pi[jb] * game.a_payoff(0, ja, jb);
            if (horizon > 0 && pi[jb] > 0.0) {
                const QState zn = tracker_step(game, z, ja, jb, params.alpha);
                ev += pi[jb] * continuum_tree_value(game, params, gamma, zn, horizon - 1);
            }
        }
        q[ja] = stage + gamma * ev;
    }
    return stage_optimum(q, game.a_actions, !game.zero_sum_pairs.empty());
}

} // namespace detail

// Exact finite-horizon value of a finite SG state by exhaustive
// enumeration of the full game tree (no memoization, no reuse of the
// value-iteration recursion). Horizon kappa covers kappa+1 stages,
// matching the finite-horizon sweeps of the solvers.
inline std::vector<double> brute_force_finite_horizon_value(const FiniteSG& sg, std::size_t state,
                                                            int horizon) {
    if (horizon < 0) throw std::invalid_argument("brute_force: negative horizon");
    std::size_t max_branch = 1;
    for (std::size_t r = 0; r + 1 < sg.row_ptr.size(); ++r)
        max_branch = std::max(max_branch, sg.row_ptr[r + 1] - sg.row_ptr[r]);
    detail::check_budget(static_cast<double>(sg.num_joint_a) * max_branch, horizon);
    const double v = detail::finite_tree_value(sg, state, horizon);
    if (sg.num_a_types() == 2 && sg.zero_sum) return {v, -v};
    return {v};
}

// Continuum-state variant: recurses through the exact learner update with
// no quantization anywhere; the oracle the quantized model is judged
// against.
inline std::vector<double> brute_force_finite_horizon_value(const NormalFormGame& game,
                                                            const LearnerParams& params,
                                                            double gamma, const QState& z0,
                                                            int horizon) {
    if (horizon < 0) throw std::invalid_argument("brute_force: negative horizon");
    if (game.num_a_types() > 2 || (game.num_a_types() == 2 && game.zero_sum_pairs.empty()))
        throw std::invalid_argument("brute_force: needs one A-type or a zero-sum pair");
    detail::check_budget(static_cast<double>(game.num_joint_a()) * game.num_joint_b(), horizon);
    const double v = detail::continuum_tree_value(game, params, gamma, z0, horizon);
    if (game.num_a_types() == 2) return {v, -v};
    return {v};
}

} // namespace qsg

#endif // QSG_BRUTE_FORCE_HPP
