#include <catch_amalgamated.hpp>

#include <cmath>

#include "qsg/grid.hpp"
#include "qsg/rng.hpp"

using namespace qsg;

TEST_CASE("grid certificate arithmetic") {
    auto g = build_grid_box({0.0, 0.0}, {1.0, 1.0}, 100);
    CHECK(g.delta == Catch::Approx(0.01).margin(1e-15));
    CHECK(g.num_states() == 10000);

    auto g1 = build_grid_box({0.0}, {1.0}, 1);
    CHECK(g1.num_states() == 1);
    CHECK(g1.center(0, 0) == Catch::Approx(0.5));
    CHECK(g1.delta == Catch::Approx(0.5));

    auto g4 = build_grid_box({0, 0, 0, 0}, {1, 1, 1, 1}, 20);
    CHECK(g4.num_states() == 160000);
}

TEST_CASE("grid cell centers follow the stated formula") {
    auto g = build_grid_box({-1.0}, {3.0}, 8);
    for (int k = 0; k < 8; ++k)
        CHECK(g.center(0, k) == Catch::Approx(-1.0 + (k + 0.5) * 0.5).margin(1e-15));
}

TEST_CASE("quantize identity at centers and boundary tie-break") {
    auto g = build_grid_box({0.0, 0.0}, {1.0, 1.0}, 10);
    for (std::size_t d = 0; d < g.num_states(); ++d)
        CHECK(quantize(g, g.state_center(d)) == d);
    // interior boundary 0.3 sits between cells 2 and 3: lower cell wins
    CHECK(quantize_coord(g, 0, 0.3) == 2);
    CHECK(quantize_coord(g, 0, 0.0) == 0);
    CHECK(quantize_coord(g, 0, 1.0) == 9);
}

TEST_CASE("quantization error never exceeds the certificate") {
    auto g = build_grid_box({-0.5, 0.0}, {1.0, 2.0}, 100);
    SplitMix64 rng(3);
    double worst = 0.0;
    for (int rep = 0; rep < 100000; ++rep) {
        QState z = {-0.5 + 1.5 * rng.next_double(), 2.0 * rng.next_double()};
        const QState c = g.state_center(quantize(g, z));
        const double err = std::abs(z[0] - c[0]) + std::abs(z[1] - c[1]);
        worst = std::max(worst, err);
        REQUIRE(err <= g.delta + 1e-12);
    }
    CHECK(worst > 0.5 * g.delta); // the certificate is reasonably tight
}

TEST_CASE("cells partition the box") {
    auto g = build_grid_box({0.0}, {1.0}, 4);
    SplitMix64 rng(4);
    for (int rep = 0; rep < 1000; ++rep) {
        const QState z = {rng.next_double()};
        const std::size_t d = quantize(g, z);
        // membership in exactly one cell: (lower + k*w, lower + (k+1)*w]
        const double w = 0.25;
        if (z[0] > 0.0) {
            CHECK(z[0] > d * w - 1e-15);
            CHECK(z[0] <= (d + 1) * w + 1e-15);
        }
    }
}

TEST_CASE("out-of-box states clip and report it") {
    auto g = build_grid_box({0.0}, {1.0}, 10);
    bool clipped = false;
    CHECK(quantize(g, {1.5}, &clipped) == 9);
    CHECK(clipped);
    clipped = false;
    CHECK(quantize(g, {-0.1}, &clipped) == 0);
    CHECK(clipped);
    clipped = false;
    quantize(g, {0.55}, &clipped);
    CHECK_FALSE(clipped);
}

TEST_CASE("zero-width coordinates collapse to one cell") {
    NormalFormGame g;
    g.a_actions = {1};
    g.n_actions = {2};
    g.a_payoffs = {{0.0, 0.0}};
    g.n_payoffs = {{0.0, 0.0}}; // constant zero payoffs: zero-width box
    g.validate();
    const QuantGrid grid = build_grid(g, 50);
    CHECK(grid.num_states() == 1);
    CHECK(grid.delta == 0.0);
    CHECK(quantize(grid, {0.0, 0.0}) == 0);
}

TEST_CASE("refinement halves the certificate") {
    const auto d25 = build_grid_box({0.0, 0.0}, {1.0, 1.0}, 25).delta;
    const auto d50 = build_grid_box({0.0, 0.0}, {1.0, 1.0}, 50).delta;
    const auto d100 = build_grid_box({0.0, 0.0}, {1.0, 1.0}, 100).delta;
    CHECK(d25 == Catch::Approx(2.0 * d50).margin(1e-15));
    CHECK(d50 == Catch::Approx(2.0 * d100).margin(1e-15));
}

TEST_CASE("grid input validation") {
    CHECK_THROWS_AS(build_grid_box({0.0}, {1.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid_box({0.0}, {-1.0}, 5), std::invalid_argument);
}
