#include <catch_amalgamated.hpp>

#include <cmath>

#include "qsg/brute_force.hpp"
#include "qsg/rng.hpp"
#include "qsg/value_iteration.hpp"
#include "qsg/verify.hpp"

using namespace qsg;

namespace {

NormalFormGame single_a_game(std::uint64_t seed) {
    NormalFormGame g;
    g.a_actions = {2};
    g.n_actions = {2};
    SplitMix64 rng(seed);
    g.a_payoffs = {std::vector<double>(4)};
    g.n_payoffs = {std::vector<double>(4)};
    for (double& x : g.a_payoffs[0]) x = rng.next_double();
    for (double& x : g.n_payoffs[0]) x = rng.next_double();
    g.validate();
    return g;
}

} // namespace

TEST_CASE("horizon zero equals the stage matrix game") {
    const NormalFormGame g = verify_toy_game(1);
    const LearnerParams params{1.0, 0.4, 0.0};
    const QState z0 = {0.2, 0.6};
    const auto v = brute_force_finite_horizon_value(g, params, 0.5, z0, 0);
    std::vector<double> stage(4);
    for (int ja = 0; ja < 4; ++ja) stage[ja] = expected_reward(g, z0, ja, 0, params.tau);
    const auto sol = solve_matrix_game(stage, 2, 2);
    CHECK(v[0] == Catch::Approx(sol.value).margin(1e-12));
    CHECK(v[1] == Catch::Approx(-sol.value).margin(1e-12));
}

TEST_CASE("constant rewards accumulate the discounted geometric sum") {
    NormalFormGame g;
    g.a_actions = {2};
    g.n_actions = {2};
    g.a_payoffs = {std::vector<double>(4, 0.4)};
    g.n_payoffs = {std::vector<double>(4)};
    SplitMix64 rng(2);
    for (double& x : g.n_payoffs[0]) x = rng.next_double();
    g.validate();
    const double gamma = 0.7;
    for (int kappa : {0, 2, 5}) {
        const auto v =
            brute_force_finite_horizon_value(g, {0.8, 0.3, 0.0}, gamma, {0.1, 0.5}, kappa);
        const double expect = 0.4 * (1.0 - std::pow(gamma, kappa + 1)) / (1.0 - gamma);
        CHECK(v[0] == Catch::Approx(expect).margin(1e-10));
    }
}

TEST_CASE("branching budget is enforced with an estimate") {
    const NormalFormGame g = verify_toy_game(2);
    try {
        brute_force_finite_horizon_value(g, {1.0, 0.5, 0.0}, 0.5, {0.0, 0.0}, 12);
        FAIL("expected a budget refusal");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
    }
}

TEST_CASE("mdp snapshots match the continuum oracle within the quantization bound") {
    const NormalFormGame g = single_a_game(17);
    const LearnerParams params{1.0, 0.5, 0.0};
    const double gamma = 0.5;
    const QuantGrid grid = build_grid(g, 200, params.q0);
    const FiniteSG sg = build_finite_sg(g, grid, params, gamma);
    SolveOptions opts;
    opts.record_snapshots = 4;
    const SolveResult res = mdp_value_iteration(sg, opts);
    const double bound = quantization_error_bound(grid.delta, gamma, params.tau,
                                                  g.num_joint_b(), g.max_abs_payoff());
    SplitMix64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t d = rng.next_u64() % grid.num_states();
        const QState z = grid.state_center(d);
        const int kappa = 3;
        const auto oracle = brute_force_finite_horizon_value(g, params, gamma, z, kappa);
        REQUIRE(std::abs(res.value_snapshots[kappa][d] - oracle[0]) <= bound);
    }
}

TEST_CASE("minimax snapshots match the continuum oracle within the quantization bound") {
    const NormalFormGame g = verify_toy_game(19);
    const LearnerParams params{1.0, 0.5, 0.0};
    const double gamma = 0.5;
    const QuantGrid grid = build_grid(g, 200, params.q0);
    const FiniteSG sg = build_finite_sg(g, grid, params, gamma);
    SolveOptions opts;
    opts.record_snapshots = 4;
    const SolveResult res = minimax_value_iteration(sg, opts);
    const double bound = quantization_error_bound(grid.delta, gamma, params.tau,
                                                  g.num_joint_b(), g.max_abs_payoff());
    SplitMix64 rng(6);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t d = rng.next_u64() % grid.num_states();
        const QState z = grid.state_center(d);
        const int kappa = 3;
        const auto oracle = brute_force_finite_horizon_value(g, params, gamma, z, kappa);
        REQUIRE(std::abs(res.value_snapshots[kappa][d] - oracle[0]) <= bound);
    }
}

TEST_CASE("finite-sg tree oracle handles the mdp case") {
    const NormalFormGame g = single_a_game(23);
    const LearnerParams params{0.9, 0.5, 0.0};
    const QuantGrid grid = build_grid(g, 3, params.q0);
    const FiniteSG sg = build_finite_sg(g, grid, params, 0.8);
    SolveOptions opts;
    opts.record_snapshots = 5;
    const SolveResult res = mdp_value_iteration(sg, opts);
    for (int kappa = 0; kappa <= 4; ++kappa)
        for (std::size_t d = 0; d < sg.num_states; ++d) {
            const auto oracle = brute_force_finite_horizon_value(sg, d, kappa);
            REQUIRE(oracle.size() == 1);
            REQUIRE(std::abs(res.value_snapshots[kappa][d] - oracle[0]) <= 1e-8);
        }
}
