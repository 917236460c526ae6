#ifndef QSG_EXPERIMENTS_HPP
#define QSG_EXPERIMENTS_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qsg/config.hpp"
#include "qsg/errors.hpp"
#include "qsg/finite_sg.hpp"
#include "qsg/report.hpp"
#include "qsg/rng.hpp"
#include "qsg/sim.hpp"
#include "qsg/snapshot.hpp"
#include "qsg/value_iteration.hpp"

namespace qsg {

// Seat-ordered description of a game used by the named experiment
// families. Payoffs are flat, row-major over seat-ordered joint actions.
struct SeatGame {
    std::vector<int> actions;
    std::vector<std::vector<double>> payoffs;
    bool zero_sum_pair = false; // seats 1 and 2 carry opposite payoffs
};

// Default prisoner's dilemma, action 0 = cooperate. Payoffs chosen so the
// all-learner baseline keeps a meaningful cooperation rate at tau = 0.01,
// alpha = 0.05 (mutual defection decays the defect estimate back to the
// initial tie instead of locking, and being exploited is mildly costly):
// C/C = 0.46, C/D = -0.1, D/C = 1, D/D = 0.
inline SeatGame pd_seat_game() {
    SeatGame g;
    g.actions = {2, 2};
    g.payoffs = {{0.46, -0.1, 1.0, 0.0}, {0.46, 1.0, -0.1, 0.0}};
    return g;
}

namespace detail {

inline std::vector<double> uniform_tensor(std::size_t n, SplitMix64& rng) {
    std::vector<double> t(n);
    for (double& x : t) x = rng.next_double();
    return t;
}

} // namespace detail

// Two seats, n_actions each: seat 0 draws uniform [0,1] payoffs, seat 1
// gets their negation.
inline SeatGame random_zero_sum_seat_game(int n_actions, std::uint64_t seed) {
    SeatGame g;
    g.actions = {n_actions, n_actions};
    SplitMix64 rng(mix_seed(seed, 0x5a5a));
    g.payoffs.push_back(
        detail::uniform_tensor(static_cast<std::size_t>(n_actions) * n_actions, rng));
    std::vector<double> neg = g.payoffs[0];
    for (double& x : neg) x = -x;
    g.payoffs.push_back(std::move(neg));
    return g;
}

// Three seats, two actions each. Seats 1 and 2 share a potential function
// phi (identical-interest pair, a potential game for any seat-0 action);
// seat 0 either shares phi too (aligned) or carries -phi (misaligned).
inline SeatGame potential_seat_game(bool aligned, std::uint64_t seed) {
    SeatGame g;
    g.actions = {2, 2, 2};
    SplitMix64 rng(mix_seed(seed, 0x90d));
    const std::vector<double> phi = detail::uniform_tensor(8, rng);
    std::vector<double> u0 = phi;
    if (!aligned)
        for (double& x : u0) x = -x;
    g.payoffs = {std::move(u0), phi, phi};
    return g;
}

// Three seats: a 2-action learner plus a competing pair with three actions
// each. Seat 0's payoff is symmetric under swapping seats 1 and 2; the pair
// carries U and -U with U antisymmetric under the swap, so it is exactly
// zero-sum and the whole game is invariant to exchanging the two rivals
// (their stage games stay skew-symmetric, with mixed equilibria).
inline SeatGame table2_seat_game(std::uint64_t seed) {
    SeatGame g;
    g.actions = {2, 3, 3};
    SplitMix64 rng(mix_seed(seed, 0x7ab1e2));
    const std::vector<double> raw_u = detail::uniform_tensor(18, rng);
    const std::vector<double> raw_t = detail::uniform_tensor(18, rng);
    auto at = [](const std::vector<double>& t, int x0, int x1, int x2) {
        return t[x0 * 9 + x1 * 3 + x2];
    };
    std::vector<double> u(18), tilde(18);
    for (int x0 = 0; x0 < 2; ++x0)
        for (int x1 = 0; x1 < 3; ++x1)
            for (int x2 = 0; x2 < 3; ++x2) {
                u[x0 * 9 + x1 * 3 + x2] =
                    0.5 * (at(raw_u, x0, x1, x2) - at(raw_u, x0, x2, x1));
                tilde[x0 * 9 + x1 * 3 + x2] =
                    0.5 * (at(raw_t, x0, x1, x2) + at(raw_t, x0, x2, x1));
            }
    std::vector<double> neg_u = u;
    for (double& x : neg_u) x = -x;
    g.payoffs = {std::move(tilde), std::move(u), std::move(neg_u)};
    g.zero_sum_pair = true;
    return g;
}

struct ReproduceOptions {
    int stages = 1000;
    int trials = 100;
    std::uint64_t base_seed = 2024;
    std::uint64_t game_seed = 1;
    double gamma = 0.8;
    LearnerParams learners{0.01, 0.05, 0.0};
    double tolerance = 1e-8;
    int max_iters = 10000;
    // per-coordinate grid resolution by scenario size: the 2-dimensional
    // states use the fine grid, the 4-dimensional ones the coarse grid
    // (a 100^4 table is far beyond desk scale)
    int intervals_fine = 100;
    int intervals_coarse = 20;
    std::string out_dir;
    bool write_files = false;
    bool chart = true;
};

struct ConfigOutcome {
    std::string label;        // roles, e.g. "AxN"
    std::vector<char> roles;  // per seat
    ModelMapping model;
    QuantGrid grid;
    SolveResult solve;
    bool solved = false;
    int intervals = 0;
    TrialSummary summary;
};

struct ReproduceResult {
    std::string family;
    SeatGame seat_game;
    std::vector<ConfigOutcome> outcomes;
};

namespace detail {

inline std::string roles_label(const std::vector<char>& roles) {
    std::string s;
    for (std::size_t k = 0; k < roles.size(); ++k) {
        if (k) s += "x";
        s += roles[k];
    }
    return s;
}

// per-coordinate resolution by state size: the fine grid for the
// 2-dimensional states, the coarse grid up to four dimensions, then
// whatever keeps the state count near the coarse grid's budget
inline int pick_intervals(int dim, const ReproduceOptions& opts) {
    if (dim <= 2) return opts.intervals_fine;
    if (dim <= 4) return opts.intervals_coarse;
    const double budget = std::pow(static_cast<double>(opts.intervals_coarse), 4.0);
    return std::max(6, static_cast<int>(std::pow(budget, 1.0 / dim)));
}

inline ConfigOutcome run_config(const SeatGame& sg, const std::vector<char>& roles,
                                const ReproduceOptions& opts) {
    ConfigOutcome out;
    out.roles = roles;
    out.label = roles_label(roles);
    int num_a = 0;
    for (char r : roles) num_a += r == 'A';
    out.model = build_model(sg.actions, roles, sg.payoffs, num_a == 2 && sg.zero_sum_pair);
    const NormalFormGame& game = out.model.game;

    const SolveResult* policy = nullptr;
    const QuantGrid* grid = nullptr;
    if (num_a > 0) {
        out.intervals = pick_intervals(game.state_dim(), opts);
        out.grid = build_grid(game, out.intervals, opts.learners.q0);
        const FiniteSG fsg = build_finite_sg(game, out.grid, opts.learners, opts.gamma);
        SolveOptions sopts;
        sopts.tolerance = opts.tolerance;
        sopts.max_iters = opts.max_iters;
        out.solve = num_a == 2 ? minimax_value_iteration(fsg, sopts)
                               : mdp_value_iteration(fsg, sopts);
        if (!out.solve.converged)
            throw NotConvergedError("reproduce: solve for " + out.label +
                                    " did not converge (residual " +
                                    std::to_string(out.solve.residual) + ")");
        out.solved = true;
        policy = &out.solve;
        grid = &out.grid;
    }
    out.summary = run_trials(game, opts.learners, policy, grid, opts.stages, opts.trials,
                             opts.base_seed, opts.gamma);
    return out;
}

inline void write_outcome_files(const std::string& dir, const ConfigOutcome& out,
                                const ReproduceOptions& opts, const std::string& family) {
    std::vector<std::string> meta;
    meta.push_back("family=" + family + " config=" + out.label);
    meta.push_back("tau=" + fmt_g17(opts.learners.tau) + " alpha=" + fmt_g17(opts.learners.alpha) +
                   " q0=" + fmt_g17(opts.learners.q0) + " gamma=" + fmt_g17(opts.gamma));
    meta.push_back("game_seed=" + std::to_string(opts.game_seed) +
                   " intervals=" + std::to_string(out.intervals));
    const std::string base = dir + "/" + out.label;
    write_summary_csv(base + ".csv", out.summary, out.model.game, meta);
    if (opts.chart)
        write_profile_chart_svg(base + ".svg", out.summary, out.model.game,
                                family + " " + out.label + ": joint action profile running means");
    if (out.solved) save_solve_result(out.solve, base + "_solve.json");
}

inline void write_comparison(const std::string& dir, const ReproduceResult& res) {
    std::ofstream out(dir + "/comparison.txt");
    std::ofstream csv(dir + "/comparison.csv");
    out << "family: " << res.family << " (build " << QSG_BUILD_ID << ")\n\n";
    csv << "config,seat,agent_type,dynamics,average_value,std_error\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-10s %5s %-7s %-12s %14s %12s\n", "config", "seat", "type",
                  "dynamics", "avg value", "std err");
    out << line;
    for (const ConfigOutcome& oc : res.outcomes) {
        for (std::size_t seat = 0; seat < oc.roles.size(); ++seat) {
            const int agent = oc.model.seat_agent[seat];
            const bool is_a = oc.roles[seat] == 'A';
            const char* dyn = !is_a              ? "IQL"
                              : oc.solve.kind == SolveResult::Kind::Mdp ? "DP"
                                                 : "Minimax-DP";
            const double mean = oc.summary.utility_mean(agent);
            const double se = oc.summary.utility_se(agent);
            std::snprintf(line, sizeof(line), "%-10s %5zu %-7s %-12s %14.4f %12.4f\n",
                          oc.label.c_str(), seat, is_a ? "A-type" : "N-type", dyn, mean, se);
            out << line;
            csv << oc.label << "," << seat << "," << (is_a ? "A-type" : "N-type") << "," << dyn
                << "," << fmt_g17(mean) << "," << fmt_g17(se) << "\n";
        }
        out << "\n";
    }
}

} // namespace detail

inline std::vector<std::string> reproduce_family_names() {
    return {"pd-1v1", "zerosum-1v1", "potential-aligned", "potential-misaligned", "table2"};
}

// Runs the named family end to end: builds the game, solves the strategic
// configurations, simulates every configuration, and (optionally) writes
// CSVs, charts, solve snapshots, and the baseline-vs-strategic comparison
// table.
inline ReproduceResult run_reproduce(const std::string& family, const ReproduceOptions& opts) {
    ReproduceResult res;
    res.family = family;
    std::vector<std::vector<char>> configs;
    if (family == "pd-1v1") {
        res.seat_game = pd_seat_game();
        configs = {{'N', 'N'}, {'A', 'N'}};
    } else if (family == "zerosum-1v1") {
        res.seat_game = random_zero_sum_seat_game(4, opts.game_seed);
        configs = {{'N', 'N'}, {'A', 'N'}};
    } else if (family == "potential-aligned" || family == "potential-misaligned") {
        res.seat_game = potential_seat_game(family == "potential-aligned", opts.game_seed);
        configs = {{'N', 'N', 'N'}, {'A', 'N', 'N'}};
    } else if (family == "table2") {
        res.seat_game = table2_seat_game(opts.game_seed);
        configs = {{'N', 'N', 'N'}, {'N', 'A', 'N'}, {'N', 'A', 'A'}};
    } else {
        std::string names;
        for (const std::string& n : reproduce_family_names()) names += " " + n;
        throw ConfigError("unknown reproduce family '" + family + "'; available:" + names);
    }

    for (const auto& roles : configs)
        res.outcomes.push_back(detail::run_config(res.seat_game, roles, opts));

    if (opts.write_files) {
        const std::string dir = opts.out_dir.empty() ? family : opts.out_dir + "/" + family;
        std::filesystem::create_directories(dir);
        for (const ConfigOutcome& oc : res.outcomes)
            detail::write_outcome_files(dir, oc, opts, family);
        detail::write_comparison(dir, res);
    }
    return res;
}

} // namespace qsg

#endif // QSG_EXPERIMENTS_HPP
