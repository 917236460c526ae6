#ifndef QSG_PIPELINE_HPP
#define QSG_PIPELINE_HPP

#include <string>
#include <vector>

#include "qsg/config.hpp"
#include "qsg/errors.hpp"
#include "qsg/experiments.hpp"

namespace qsg {

// Fills a config's game section from a named generator. Roles default per
// generator when the config leaves them out.
inline void resolve_generator(ExperimentConfig& cfg) {
    if (cfg.generator.empty()) return;
    SeatGame sg;
    std::vector<char> default_roles;
    if (cfg.generator == "pd") {
        sg = pd_seat_game();
        default_roles = {'A', 'N'};
    } else if (cfg.generator == "random-zerosum") {
        const int n = cfg.seat_actions.empty() ? 4 : cfg.seat_actions[0];
        sg = random_zero_sum_seat_game(n, cfg.game_seed);
        default_roles = {'A', 'N'};
    } else if (cfg.generator == "potential-aligned") {
        sg = potential_seat_game(true, cfg.game_seed);
        default_roles = {'A', 'N', 'N'};
    } else if (cfg.generator == "potential-misaligned") {
        sg = potential_seat_game(false, cfg.game_seed);
        default_roles = {'A', 'N', 'N'};
    } else if (cfg.generator == "table2") {
        sg = table2_seat_game(cfg.game_seed);
        default_roles = {'N', 'A', 'A'};
    } else {
        throw ConfigError("unknown game generator '" + cfg.generator + "'");
    }
    cfg.seat_actions = sg.actions;
    cfg.seat_payoffs = sg.payoffs;
    if (cfg.roles.empty()) cfg.roles = default_roles;
    int num_a = 0;
    for (char r : cfg.roles) num_a += r == 'A';
    cfg.zero_sum = sg.zero_sum_pair && num_a == 2;
    cfg.generator.clear();
}

inline QuantGrid grid_for_config(const ExperimentConfig& cfg, const NormalFormGame& game) {
    if (cfg.grid_lower && cfg.grid_upper) {
        std::vector<double> lo(game.state_dim(), *cfg.grid_lower);
        std::vector<double> hi(game.state_dim(), *cfg.grid_upper);
        return build_grid_box(std::move(lo), std::move(hi), cfg.intervals);
    }
    return build_grid(game, cfg.intervals, cfg.learners.q0);
}

} // namespace qsg

#endif // QSG_PIPELINE_HPP
