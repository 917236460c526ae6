#include <catch_amalgamated.hpp>

#include <cmath>

#include "qsg/brute_force.hpp"
#include "qsg/finite_sg.hpp"
#include "qsg/rng.hpp"
#include "qsg/value_iteration.hpp"

using namespace qsg;

namespace {

// hand-built finite SG: explicit rewards and transitions, no game behind it
FiniteSG make_sg(std::size_t states, std::vector<int> a_actions,
                 std::vector<std::vector<double>> rewards,
                 std::vector<std::vector<std::pair<std::uint32_t, double>>> rows, double gamma,
                 bool zero_sum = false) {
    FiniteSG sg;
    sg.num_states = states;
    sg.a_actions = std::move(a_actions);
    sg.num_joint_a = 1;
    for (int k : sg.a_actions) sg.num_joint_a *= k;
    sg.gamma = gamma;
    sg.zero_sum = zero_sum;
    sg.rewards = std::move(rewards);
    sg.row_ptr.push_back(0);
    for (const auto& row : rows) {
        for (const auto& [next, p] : row) {
            sg.next_state.push_back(next);
            sg.prob.push_back(p);
        }
        sg.row_ptr.push_back(sg.next_state.size());
    }
    return sg;
}

NormalFormGame random_zero_sum_game(std::uint64_t seed) {
    NormalFormGame g;
    g.a_actions = {2, 2};
    g.n_actions = {2};
    SplitMix64 rng(seed);
    g.a_payoffs.resize(2);
    g.a_payoffs[0].resize(8);
    for (double& x : g.a_payoffs[0]) x = rng.next_double();
    g.a_payoffs[1] = g.a_payoffs[0];
    for (double& x : g.a_payoffs[1]) x = -x;
    g.n_payoffs = {std::vector<double>(8)};
    for (double& x : g.n_payoffs[0]) x = rng.next_double();
    g.zero_sum_pairs = {{0, 1}};
    g.validate();
    return g;
}

} // namespace

TEST_CASE("constant rewards converge to c/(1-gamma)") {
    // two states, arbitrary transitions, every reward 0.3
    const double c = 0.3, gamma = 0.8;
    auto sg = make_sg(2, {2}, {std::vector<double>(4, c)},
                      {{{1, 1.0}}, {{0, 0.5}, {1, 0.5}}, {{0, 1.0}}, {{0, 0.25}, {1, 0.75}}},
                      gamma);
    const SolveResult res = mdp_value_iteration(sg);
    REQUIRE(res.converged);
    for (double v : res.values) CHECK(v == Catch::Approx(c / (1 - gamma)).margin(1e-6));

    auto sg2 = make_sg(1, {2, 2}, {std::vector<double>(4, c), std::vector<double>(4, -c)},
                       {{{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}}, gamma, true);
    const SolveResult res2 = minimax_value_iteration(sg2);
    REQUIRE(res2.converged);
    CHECK(res2.values[0] == Catch::Approx(c / (1 - gamma)).margin(1e-6));
}

TEST_CASE("single-state matching pennies has value zero") {
    auto sg = make_sg(1, {2, 2}, {{1.0, -1.0, -1.0, 1.0}, {-1.0, 1.0, 1.0, -1.0}},
                      {{{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}}, 0.9, true);
    const SolveResult res = minimax_value_iteration(sg);
    REQUIRE(res.converged);
    CHECK(res.values[0] == Catch::Approx(0.0).margin(1e-8));
    CHECK(res.policies[0][0] == Catch::Approx(0.5).margin(1e-8));
    CHECK(res.policies[1][0] == Catch::Approx(0.5).margin(1e-8));
}

TEST_CASE("two-state chain solves by hand") {
    // state 0: action 0 self-loops with reward 0, action 1 moves to the
    // absorbing state 1 earning 1; state 1 pays 1 forever
    auto sg = make_sg(2, {2}, {{0.0, 1.0, 1.0, 1.0}},
                      {{{0, 1.0}}, {{1, 1.0}}, {{1, 1.0}}, {{1, 1.0}}}, 0.8);
    const SolveResult res = mdp_value_iteration(sg);
    REQUIRE(res.converged);
    CHECK(res.values[1] == Catch::Approx(5.0).margin(1e-6));
    CHECK(res.values[0] == Catch::Approx(5.0).margin(1e-6));
    // greedy action in state 0 is the move, not the self-loop
    CHECK(res.policies[0][0 * 2 + 1] == 1.0);
}

TEST_CASE("greedy policy is invariant to constant reward shifts") {
    SplitMix64 rng(42);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 4;
        std::vector<double> rew(n * 3);
        for (double& x : rew) x = rng.next_double();
        std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;
        for (std::size_t r = 0; r < n * 3; ++r) {
            const auto s1 = static_cast<std::uint32_t>(rng.next_u64() % n);
            const auto s2 = static_cast<std::uint32_t>(rng.next_u64() % n);
            if (s1 == s2)
                rows.push_back({{s1, 1.0}});
            else
                rows.push_back({{std::min(s1, s2), 0.6}, {std::max(s1, s2), 0.4}});
        }
        auto sg = make_sg(n, {3}, {rew}, rows, 0.8);
        const SolveResult base = mdp_value_iteration(sg);
        const double c = 2.5;
        for (double& x : sg.rewards[0]) x += c;
        const SolveResult shifted = mdp_value_iteration(sg);
        REQUIRE(base.converged);
        REQUIRE(shifted.converged);
        for (std::size_t d = 0; d < n; ++d) {
            CHECK(shifted.values[d] ==
                  Catch::Approx(base.values[d] + c / (1 - 0.8)).margin(1e-5));
            CHECK(shifted.policies[0][d * 3 + 0] == base.policies[0][d * 3 + 0]);
            CHECK(shifted.policies[0][d * 3 + 1] == base.policies[0][d * 3 + 1]);
            CHECK(shifted.policies[0][d * 3 + 2] == base.policies[0][d * 3 + 2]);
        }
    }
}

TEST_CASE("mdp greedy ties break to the lowest action index") {
    // both actions identical: action 0 must carry the point mass
    auto sg = make_sg(1, {2}, {{0.5, 0.5}}, {{{0, 1.0}}, {{0, 1.0}}}, 0.5);
    const SolveResult res = mdp_value_iteration(sg);
    CHECK(res.policies[0][0] == 1.0);
    CHECK(res.policies[0][1] == 0.0);
}

TEST_CASE("iteration sequence contracts and stays bounded") {
    const NormalFormGame g = random_zero_sum_game(15);
    const QuantGrid grid = build_grid(g, 4);
    const LearnerParams params{0.5, 0.4, 0.0};
    const FiniteSG sg = build_finite_sg(g, grid, params, 0.8);
    SolveOptions opts;
    opts.record_snapshots = 16;
    const SolveResult res = minimax_value_iteration(sg, opts);
    REQUIRE(res.converged);
    for (std::size_t k = 1; k < res.residual_history.size(); ++k)
        REQUIRE(res.residual_history[k] <= 0.8 * res.residual_history[k - 1] + 1e-12);
    const double m_inf = g.max_abs_payoff() / (1 - 0.8);
    for (double v : res.values) REQUIRE(std::abs(v) <= m_inf);
    // finite-horizon snapshots respect the horizon bound M_kappa
    for (std::size_t kappa = 0; kappa < res.value_snapshots.size(); ++kappa) {
        const double m_kappa =
            (1 - std::pow(0.8, kappa + 1)) / (1 - 0.8) * g.max_abs_payoff();
        for (double v : res.value_snapshots[kappa]) REQUIRE(std::abs(v) <= m_kappa + 1e-12);
    }
}

TEST_CASE("swapping the zero-sum pair negates values and swaps strategies") {
    const NormalFormGame g = random_zero_sum_game(23);
    const QuantGrid grid = build_grid(g, 3);
    const LearnerParams params{0.7, 0.3, 0.0};
    const FiniteSG sg = build_finite_sg(g, grid, params, 0.7);
    const SolveResult res = minimax_value_iteration(sg);

    // relabeled game: the second agent moves first, every tensor re-indexed
    NormalFormGame swapped;
    swapped.a_actions = {g.a_actions[1], g.a_actions[0]};
    swapped.n_actions = g.n_actions;
    swapped.a_payoffs.assign(2, std::vector<double>(8));
    swapped.n_payoffs.assign(1, std::vector<double>(8));
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int jb = 0; jb < 2; ++jb) {
                // new joint (x, y) corresponds to old joint (y, x)
                swapped.a_payoffs[0][(x * 2 + y) * 2 + jb] = g.a_payoffs[1][(y * 2 + x) * 2 + jb];
                swapped.a_payoffs[1][(x * 2 + y) * 2 + jb] = g.a_payoffs[0][(y * 2 + x) * 2 + jb];
                swapped.n_payoffs[0][(x * 2 + y) * 2 + jb] = g.n_payoffs[0][(y * 2 + x) * 2 + jb];
            }
    swapped.zero_sum_pairs = {{0, 1}};
    swapped.validate();
    const FiniteSG sg2 = build_finite_sg(swapped, grid, params, 0.7);
    const SolveResult res2 = minimax_value_iteration(sg2);
    REQUIRE(res2.converged);
    std::vector<double> stage(sg2.num_joint_a);
    for (std::size_t d = 0; d < sg.num_states; ++d) {
        CHECK(res2.values[d] == Catch::Approx(-res.values[d]).margin(1e-7));
        // the original pair's strategies, roles exchanged, certify the
        // relabeled game's stage matrix at the negated value
        for (int ja = 0; ja < sg2.num_joint_a; ++ja) {
            double ev = 0.0;
            const auto [b, e] = sg2.row_range(d, ja);
            for (std::size_t k = b; k < e; ++k) ev += sg2.prob[k] * res2.values[sg2.next_state[k]];
            stage[ja] = sg2.rewards[0][sg2.row_index(d, ja)] + sg2.gamma * ev;
        }
        MatrixGameSolution sol;
        sol.value = -res.values[d];
        sol.row_strategy = {res.policies[1][d * 2], res.policies[1][d * 2 + 1]};
        sol.col_strategy = {res.policies[0][d * 2], res.policies[0][d * 2 + 1]};
        const auto [rs, co] = saddle_residuals(stage, 2, 2, sol);
        CHECK(rs <= 1e-6);
        CHECK(co <= 1e-6);
    }
}

TEST_CASE("scaling rewards scales values and keeps strategies optimal") {
    const NormalFormGame g = random_zero_sum_game(31);
    const QuantGrid grid = build_grid(g, 3);
    const LearnerParams params{0.6, 0.25, 0.0};
    FiniteSG sg = build_finite_sg(g, grid, params, 0.75);
    const SolveResult base = minimax_value_iteration(sg);
    const double s = 3.5;
    for (auto& table : sg.rewards)
        for (double& x : table) x *= s;
    const SolveResult scaled = minimax_value_iteration(sg);
    REQUIRE(scaled.converged);
    std::vector<double> stage(sg.num_joint_a);
    for (std::size_t d = 0; d < sg.num_states; ++d) {
        CHECK(scaled.values[d] == Catch::Approx(s * base.values[d]).margin(1e-6));
        // the base strategies certify the scaled stage game at the scaled value
        for (int ja = 0; ja < sg.num_joint_a; ++ja) {
            double ev = 0.0;
            const auto [b, e] = sg.row_range(d, ja);
            for (std::size_t k = b; k < e; ++k) ev += sg.prob[k] * scaled.values[sg.next_state[k]];
            stage[ja] = sg.rewards[0][sg.row_index(d, ja)] + sg.gamma * ev;
        }
        MatrixGameSolution sol;
        sol.value = scaled.values[d];
        sol.row_strategy = {base.policies[0][d * 2], base.policies[0][d * 2 + 1]};
        sol.col_strategy = {base.policies[1][d * 2], base.policies[1][d * 2 + 1]};
        const auto [rs, co] = saddle_residuals(stage, 2, 2, sol);
        CHECK(rs <= 1e-6);
        CHECK(co <= 1e-6);
    }
}

TEST_CASE("finite-horizon snapshots match exhaustive tree enumeration") {
    const NormalFormGame g = random_zero_sum_game(57);
    const LearnerParams params{1.0, 0.5, 0.0};
    const QuantGrid grid = build_grid(g, 3, params.q0); // 9 states
    const FiniteSG sg = build_finite_sg(g, grid, params, 0.8);
    SolveOptions opts;
    opts.record_snapshots = 6;
    const SolveResult res = minimax_value_iteration(sg, opts);
    for (int kappa = 0; kappa <= 5; ++kappa) {
        for (std::size_t d = 0; d < sg.num_states; ++d) {
            const auto oracle = brute_force_finite_horizon_value(sg, d, kappa);
            REQUIRE(std::abs(res.value_snapshots[kappa][d] - oracle[0]) <= 1e-8);
            REQUIRE(oracle[1] == -oracle[0]);
        }
    }
    // equilibrium strategies from the converged stage games certify the value
    std::vector<double> stage(sg.num_joint_a);
    for (std::size_t d = 0; d < sg.num_states; ++d) {
        for (int ja = 0; ja < sg.num_joint_a; ++ja) {
            double ev = 0.0;
            const auto [b, e] = sg.row_range(d, ja);
            for (std::size_t k = b; k < e; ++k) ev += sg.prob[k] * res.values[sg.next_state[k]];
            stage[ja] = sg.rewards[0][sg.row_index(d, ja)] + sg.gamma * ev;
        }
        MatrixGameSolution sol;
        sol.value = res.values[d];
        sol.row_strategy = {res.policies[0][d * 2], res.policies[0][d * 2 + 1]};
        sol.col_strategy = {res.policies[1][d * 2], res.policies[1][d * 2 + 1]};
        const auto [rs, co] = saddle_residuals(stage, 2, 2, sol);
        CHECK(rs <= 1e-6);
        CHECK(co <= 1e-6);
    }
}

TEST_CASE("non-convergence is flagged and policy extraction refuses it") {
    const NormalFormGame g = random_zero_sum_game(3);
    const QuantGrid grid = build_grid(g, 3);
    const FiniteSG sg = build_finite_sg(g, grid, {0.5, 0.3, 0.0}, 0.9);
    SolveOptions opts;
    opts.max_iters = 2;
    const SolveResult res = minimax_value_iteration(sg, opts);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 2);
    CHECK(res.residual > opts.tolerance);
    CHECK_THROWS(extract_stationary_policy(res));
    // a converged run hands the policies back
    const SolveResult ok = minimax_value_iteration(sg);
    CHECK(&extract_stationary_policy(ok) == &ok.policies);
}

TEST_CASE("solver preconditions") {
    const NormalFormGame g = random_zero_sum_game(11);
    const QuantGrid grid = build_grid(g, 3);
    const FiniteSG sg = build_finite_sg(g, grid, {0.5, 0.3, 0.0}, 0.8);
    CHECK_THROWS_AS(mdp_value_iteration(sg), std::invalid_argument);
    FiniteSG single = sg;
    single.a_actions = {4};
    single.zero_sum = false;
    single.rewards.pop_back();
    CHECK_THROWS_AS(minimax_value_iteration(single), std::invalid_argument);
}
