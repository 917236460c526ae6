#ifndef QSG_FINITE_SG_HPP
#define QSG_FINITE_SG_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsg/game.hpp"
#include "qsg/grid.hpp"

namespace qsg {

// 64-bit FNV-1a over the byte images of game tensors and model
// parameters; keys solve results to the exact model they were computed
// for.
inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t provenance_hash(const NormalFormGame& game, const LearnerParams& params,
                                     double gamma, const QuantGrid& grid) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix_int = [&](std::int64_t v) { h = fnv1a(&v, sizeof(v), h); };
    auto mix_dbl = [&](double v) { h = fnv1a(&v, sizeof(v), h); };
    for (int k : game.a_actions) mix_int(k);
    mix_int(-1);
    for (int k : game.n_actions) mix_int(k);
    mix_int(-2);
    for (const auto& t : game.a_payoffs)
        for (double u : t) mix_dbl(u);
    for (const auto& t : game.n_payoffs)
        for (double u : t) mix_dbl(u);
    for (auto [j1, j2] : game.zero_sum_pairs) {
        mix_int(j1);
        mix_int(j2);
    }
    mix_dbl(params.tau);
    mix_dbl(params.alpha);
    mix_dbl(params.q0);
    mix_dbl(gamma);
    mix_int(grid.intervals);
    for (int c : grid.cells) mix_int(c);
    for (double x : grid.lower) mix_dbl(x);
    for (double x : grid.upper) mix_dbl(x);
    return h;
}

// Finite stochastic game over grid cells: exact expected rewards at cell
// centers and transitions that push each center through one learner update
// per joint N-action, re-quantized into the grid. Transition rows are
// sparse (at most one entry per joint N-action before merging).
struct FiniteSG {
    std::size_t num_states = 0;
    std::vector<int> a_actions;
    int num_joint_a = 1;
    double gamma = 0.0;
    // model header, echoed into snapshots alongside the provenance hash
    double tau = 0.0;
    double alpha = 0.0;
    double q0 = 0.0;
    int intervals = 0;
    std::vector<std::vector<double>> rewards; // per A-type, [state*num_joint_a + ja]
    std::vector<std::size_t> row_ptr;         // size num_states*num_joint_a + 1
    std::vector<std::uint32_t> next_state;
    std::vector<double> prob;
    bool zero_sum = false; // two A-types with opposite rewards
    std::uint64_t provenance = 0;

    int num_a_types() const { return static_cast<int>(a_actions.size()); }

    std::size_t row_index(std::size_t state, int ja) const {
        return state * static_cast<std::size_t>(num_joint_a) + ja;
    }
    std::pair<std::size_t, std::size_t> row_range(std::size_t state, int ja) const {
        const std::size_t r = row_index(state, ja);
        return {row_ptr[r], row_ptr[r + 1]};
    }
    double reward(int j, std::size_t state, int ja) const {
        return rewards[j][row_index(state, ja)];
    }

    double max_abs_reward() const {
        double m = 0.0;
        for (const auto& t : rewards)
            for (double r : t) m = std::max(m, std::abs(r));
        return m;
    }
};

inline FiniteSG build_finite_sg(const NormalFormGame& game, const QuantGrid& grid,
                                const LearnerParams& params, double gamma) {
    game.validate();
    params.validate();
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("build_finite_sg: gamma must lie in (0,1)");
    if (grid.dim() != game.state_dim())
        throw std::invalid_argument("build_finite_sg: grid dimension mismatch");
    if (grid.num_states() > 0xffffffffull)
        throw std::invalid_argument("build_finite_sg: grid too large for 32-bit state indices");

    FiniteSG sg;
    sg.num_states = grid.num_states();
    sg.a_actions = game.a_actions;
    sg.num_joint_a = game.num_joint_a();
    sg.gamma = gamma;
    sg.tau = params.tau;
    sg.alpha = params.alpha;
    sg.q0 = params.q0;
    sg.intervals = grid.intervals;
    sg.zero_sum = game.num_a_types() == 2 && !game.zero_sum_pairs.empty();
    sg.provenance = provenance_hash(game, params, gamma, grid);

    const int na = sg.num_joint_a;
    const int nb = game.num_joint_b();
    const std::size_t nrows = sg.num_states * static_cast<std::size_t>(na);
    sg.rewards.assign(game.num_a_types(), std::vector<double>(nrows, 0.0));
    sg.row_ptr.assign(nrows + 1, 0);
    sg.next_state.reserve(nrows);
    sg.prob.reserve(nrows);

    std::vector<std::pair<std::uint32_t, double>> branches;
    for (std::size_t d = 0; d < sg.num_states; ++d) {
        const QState z = grid.state_center(d);
        const std::vector<double> pi = joint_policy(game, z, params.tau);
        for (int ja = 0; ja < na; ++ja) {
            for (int j = 0; j < game.num_a_types(); ++j) {
                double r = 0.0;
                for (int jb = 0; jb < nb; ++jb) r += pi[jb] * game.a_payoff(j, ja, jb);
                sg.rewards[j][sg.row_index(d, ja)] = r;
            }
            if (sg.zero_sum) {
                // keep the declared pair's rewards exact negatives
                const auto [j1, j2] = game.zero_sum_pairs.front();
                sg.rewards[j2][sg.row_index(d, ja)] = -sg.rewards[j1][sg.row_index(d, ja)];
            }
            branches.clear();
            for (int jb = 0; jb < nb; ++jb) {
                if (pi[jb] == 0.0) continue; // underflowed softmax mass
                const QState zn = tracker_step(game, z, ja, jb, params.alpha);
                branches.emplace_back(static_cast<std::uint32_t>(quantize(grid, zn)), pi[jb]);
            }
            std::stable_sort(branches.begin(), branches.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            // merge duplicates, summing probability mass
            for (std::size_t k = 0; k < branches.size();) {
                double p = branches[k].second;
                std::size_t k2 = k + 1;
                while (k2 < branches.size() && branches[k2].first == branches[k].first)
                    p += branches[k2++].second;
                sg.next_state.push_back(branches[k].first);
                sg.prob.push_back(p);
                k = k2;
            }
            sg.row_ptr[sg.row_index(d, ja) + 1] = sg.next_state.size();
        }
    }
    return sg;
}

} // namespace qsg

#endif // QSG_FINITE_SG_HPP
