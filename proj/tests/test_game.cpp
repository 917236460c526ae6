#include <catch_amalgamated.hpp>

#include <cmath>

#include "qsg/bounds.hpp"
#include "qsg/game.hpp"
#include "qsg/rng.hpp"

using namespace qsg;

namespace {

NormalFormGame one_learner_game(std::vector<double> a_payoff, std::vector<double> n_payoff,
                                int n_act) {
    NormalFormGame g;
    g.a_actions = {1};
    g.n_actions = {n_act};
    g.a_payoffs = {std::move(a_payoff)};
    g.n_payoffs = {std::move(n_payoff)};
    g.validate();
    return g;
}

} // namespace

TEST_CASE("softmax basics") {
    const std::vector<double> q0 = {0.0, 0.0};
    auto p = softmax_policy(q0, 1.0);
    CHECK(p[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(p[1] == Catch::Approx(0.5).margin(1e-15));

    const std::vector<double> q1 = {1.0, 0.0};
    p = softmax_policy(q1, 1.0);
    CHECK(p[0] == Catch::Approx(0.7310585786).margin(1e-6));
    CHECK(p[1] == Catch::Approx(0.2689414214).margin(1e-6));

    const std::vector<double> q2 = {10.0, 0.0};
    p = softmax_policy(q2, 0.01);
    CHECK(p[0] >= 1.0 - 1e-12);
}

TEST_CASE("softmax sums to one and stays positive at low temperature") {
    SplitMix64 rng(71);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> q(4);
        for (double& x : q) x = rng.next_double() * 2.0 - 1.0;
        const auto p = softmax_policy(q, 0.01);
        double s = 0.0;
        for (double x : p) {
            CHECK(x > 0.0);
            s += x;
        }
        CHECK(std::abs(s - 1.0) <= 1e-12);
    }
}

TEST_CASE("softmax shift invariance") {
    SplitMix64 rng(12);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> q(3), qs(3);
        const double c = rng.next_double() * 20.0 - 10.0;
        for (int k = 0; k < 3; ++k) {
            q[k] = rng.next_double() * 4.0 - 2.0;
            qs[k] = q[k] + c;
        }
        const auto p = softmax_policy(q, 0.7);
        const auto ps = softmax_policy(qs, 0.7);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(p[k] - ps[k]) <= 1e-12);
    }
}

TEST_CASE("softmax rejects bad input") {
    CHECK_THROWS_AS(softmax_policy(std::vector<double>{0.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(softmax_policy(std::vector<double>{0.0, 1.0}, -1.0), std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(softmax_policy(std::vector<double>{nan, 1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("iql update examples") {
    CHECK(iql_update({0.0, 0.0}, 0, 1.0, 0.05) == std::vector<double>{0.05, 0.0});
    CHECK(iql_update({0.5, 0.2}, 1, 0.2, 0.05) == std::vector<double>{0.5, 0.2});
    CHECK(iql_update({0.4, 0.0}, 0, 0.0, 0.5) == std::vector<double>{0.2, 0.0});
    CHECK_THROWS_AS(iql_update({0.0, 0.0}, 2, 1.0, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(iql_update({0.0}, 0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("iql update stays in the hull of estimate and payoff") {
    SplitMix64 rng(9);
    for (int rep = 0; rep < 500; ++rep) {
        const double q = rng.next_double() * 4.0 - 2.0;
        const double u = rng.next_double() * 4.0 - 2.0;
        const double a = 0.01 + 0.98 * rng.next_double();
        const double next = iql_update({q}, 0, u, a)[0];
        CHECK(next >= std::min(q, u) - 1e-15);
        CHECK(next <= std::max(q, u) + 1e-15);
    }
}

TEST_CASE("tracker step equals the learner update") {
    // single learner, payoff 1 for observed action 0
    auto g = one_learner_game({1.0, 0.5}, {1.0, 0.5}, 2);
    const QState t0 = {0.0, 0.0};
    CHECK(tracker_step(g, t0, 0, 0, 0.05) == QState{0.05, 0.0});
    // payoff equal to tracked entry leaves the state unchanged
    const QState fixed = {1.0, 0.3};
    CHECK(tracker_step(g, fixed, 0, 0, 0.05) == fixed);
}

TEST_CASE("tracker trajectory matches learner trajectory exactly") {
    NormalFormGame g;
    g.a_actions = {2};
    g.n_actions = {2, 3};
    SplitMix64 payoff_rng(44);
    const std::size_t cells = 2 * 6;
    g.a_payoffs = {std::vector<double>(cells)};
    g.n_payoffs = {std::vector<double>(cells), std::vector<double>(cells)};
    for (auto* t : {&g.a_payoffs[0], &g.n_payoffs[0], &g.n_payoffs[1]})
        for (double& x : *t) x = payoff_rng.next_double() * 2.0 - 1.0;
    g.validate();

    const double alpha = 0.1;
    QState learner(g.state_dim(), 0.0);
    QState tracker = learner;
    SplitMix64 rng(7);
    for (int k = 0; k < 10; ++k) {
        const int ja = static_cast<int>(rng.next_u64() % 2);
        const int jb = static_cast<int>(rng.next_u64() % 6);
        // learners update their own blocks from realized payoffs
        const std::vector<int> bacts = g.decode_joint_b(jb);
        int off = 0;
        for (int i = 0; i < g.num_n_types(); ++i) {
            std::vector<double> block(learner.begin() + off,
                                      learner.begin() + off + g.n_actions[i]);
            block = iql_update(std::move(block), bacts[i], g.n_payoff(i, ja, jb), alpha);
            std::copy(block.begin(), block.end(), learner.begin() + off);
            off += g.n_actions[i];
        }
        tracker = tracker_step(g, std::move(tracker), ja, jb, alpha);
        REQUIRE(tracker == learner); // exact, not approximate
    }
}

TEST_CASE("expected reward examples") {
    auto g = one_learner_game({1.0, 3.0}, {0.0, 0.0}, 2);
    CHECK(expected_reward(g, {0.0, 0.0}, 0, 0, 1.0) == Catch::Approx(2.0).margin(1e-12));

    // two learners, constant payoff tensor
    NormalFormGame g2;
    g2.a_actions = {1};
    g2.n_actions = {2, 2};
    g2.a_payoffs = {std::vector<double>(4, 0.7)};
    g2.n_payoffs = {std::vector<double>(4, 0.0), std::vector<double>(4, 0.0)};
    g2.validate();
    CHECK(expected_reward(g2, {0.1, -0.2, 0.3, 0.0}, 0, 0, 0.5) ==
          Catch::Approx(0.7).margin(1e-12));

    // saturated softmax picks the first column's payoff
    CHECK(expected_reward(g, {10.0, 0.0}, 0, 0, 0.01) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("zero-sum declaration is validated") {
    NormalFormGame g;
    g.a_actions = {2, 2};
    g.n_actions = {2};
    g.a_payoffs = {std::vector<double>(8, 1.0), std::vector<double>(8, -1.0)};
    g.n_payoffs = {std::vector<double>(8, 0.0)};
    g.zero_sum_pairs = {{0, 1}};
    CHECK_NOTHROW(g.validate());
    g.a_payoffs[1][3] = 0.5;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("joint policy lipschitz (sampled lemma check)") {
    const NormalFormGame g = [] {
        NormalFormGame g;
        g.a_actions = {2};
        g.n_actions = {2, 2};
        SplitMix64 rng(5);
        g.a_payoffs = {std::vector<double>(8)};
        g.n_payoffs = {std::vector<double>(8), std::vector<double>(8)};
        for (auto* t : {&g.a_payoffs[0], &g.n_payoffs[0], &g.n_payoffs[1]})
            for (double& x : *t) x = rng.next_double();
        g.validate();
        return g;
    }();
    const auto r1 = check_policy_lipschitz(g, 0.5, 2000, 17);
    CHECK(r1.satisfied);
    const auto r2 = check_reward_lipschitz(g, 0.5, 500, 18);
    CHECK(r2.satisfied);
    const auto rc = check_next_state_contraction(g, {0.5, 0.3, 0.0}, 500, 19);
    CHECK(rc.satisfied);
    CHECK(rc.max_ratio <= 1.0 + 1e-12);
}
