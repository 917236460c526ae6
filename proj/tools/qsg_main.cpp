#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsg/config.hpp"
#include "qsg/errors.hpp"
#include "qsg/experiments.hpp"
#include "qsg/pipeline.hpp"
#include "qsg/report.hpp"
#include "qsg/sim.hpp"
#include "qsg/snapshot.hpp"
#include "qsg/value_iteration.hpp"
#include "qsg/verify.hpp"

namespace {

struct CommonOverrides {
    int trials = -1;
    int stages = -1;
    long long seed = -1;
    int intervals = -1;
};

void apply(qsg::ExperimentConfig& cfg, const CommonOverrides& ov) {
    if (ov.trials >= 0) cfg.trials = ov.trials;
    if (ov.stages >= 0) cfg.stages = ov.stages;
    if (ov.seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(ov.seed);
    if (ov.intervals >= 0) cfg.intervals = ov.intervals;
}

qsg::ExperimentConfig load_resolved(const std::string& path, const CommonOverrides& ov) {
    qsg::ExperimentConfig cfg = qsg::load_experiment_config(path);
    apply(cfg, ov);
    qsg::resolve_generator(cfg);
    qsg::validate_experiment_config(cfg);
    return cfg;
}

std::string pick_out_dir(const std::string& cli_out, bool cli_out_given,
                         const qsg::ExperimentConfig& cfg) {
    if (!cli_out_given && !cfg.output_dir.empty()) return cfg.output_dir;
    return cli_out;
}

int cmd_solve(const std::string& config_path, const std::string& cli_out, bool out_given,
              const CommonOverrides& ov) {
    const qsg::ExperimentConfig cfg = load_resolved(config_path, ov);
    const std::string out_dir = pick_out_dir(cli_out, out_given, cfg);
    const qsg::ModelMapping model = qsg::build_model(cfg);
    if (model.game.num_a_types() == 0)
        throw qsg::ConfigError("solve: configuration has no A-type seat");
    const qsg::QuantGrid grid = qsg::grid_for_config(cfg, model.game);
    std::printf("building finite SG: %zu states, %d joint A-actions, %d N-outcomes\n",
                grid.num_states(), model.game.num_joint_a(), model.game.num_joint_b());
    const qsg::FiniteSG sg = qsg::build_finite_sg(model.game, grid, cfg.learners, cfg.gamma);
    qsg::SolveOptions opts;
    opts.tolerance = cfg.tolerance;
    opts.max_iters = cfg.max_iters;
    const qsg::SolveResult res = model.game.num_a_types() == 2
                                     ? qsg::minimax_value_iteration(sg, opts)
                                     : qsg::mdp_value_iteration(sg, opts);
    if (!res.converged)
        throw qsg::NotConvergedError("solve: residual " + std::to_string(res.residual) +
                                     " after " + std::to_string(res.iterations) + " sweeps");
    std::filesystem::create_directories(out_dir);
    qsg::save_finite_sg(sg, out_dir + "/finite_sg.json");
    qsg::save_solve_result(res, out_dir + "/solve.json");
    const qsg::QState z0(model.game.state_dim(), cfg.learners.q0);
    const double v0 = res.values[qsg::quantize(grid, z0)];
    std::printf("solved (%s): %d sweeps, residual %.3g\n",
                res.kind == qsg::SolveResult::Kind::Mdp ? "mdp" : "minimax", res.iterations,
                res.residual);
    std::printf("value at initial state: %.6f (normalized %.6f)\n", v0, (1.0 - cfg.gamma) * v0);
    std::printf("provenance %016llx -> %s\n",
                static_cast<unsigned long long>(res.provenance), out_dir.c_str());
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& policy_path,
                 const std::string& cli_out, bool out_given, const CommonOverrides& ov,
                 bool chart_flag, int window) {
    qsg::ExperimentConfig cfg = load_resolved(config_path, ov);
    if (window >= 0) cfg.window = window;
    const std::string out_dir = pick_out_dir(cli_out, out_given, cfg);
    const qsg::ModelMapping model = qsg::build_model(cfg);
    qsg::QuantGrid grid;
    qsg::SolveResult res;
    const qsg::SolveResult* policy = nullptr;
    const qsg::QuantGrid* gp = nullptr;
    if (model.game.num_a_types() > 0) {
        if (policy_path.empty())
            throw qsg::ConfigError("simulate: configuration has A-types, --policy is required");
        grid = qsg::grid_for_config(cfg, model.game);
        const std::uint64_t expect =
            qsg::provenance_hash(model.game, cfg.learners, cfg.gamma, grid);
        res = qsg::load_solve_result(policy_path, expect);
        policy = &res;
        gp = &grid;
    }
    const qsg::TrialSummary summary = qsg::run_trials(
        model.game, cfg.learners, policy, gp, cfg.stages, cfg.trials, cfg.base_seed, cfg.gamma);
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> meta;
    meta.push_back("config=" + config_path + " name=" + cfg.name);
    std::string roster = "actions=";
    for (std::size_t s = 0; s < cfg.seat_actions.size(); ++s)
        roster += (s ? "," : "") + std::to_string(cfg.seat_actions[s]);
    roster += " roles=";
    for (std::size_t s = 0; s < cfg.roles.size(); ++s) roster += cfg.roles[s];
    roster += std::string(" zero_sum=") + (cfg.zero_sum ? "true" : "false") +
              " game_seed=" + std::to_string(cfg.game_seed);
    meta.push_back(roster);
    meta.push_back("tau=" + qsg::fmt_g17(cfg.learners.tau) +
                   " alpha=" + qsg::fmt_g17(cfg.learners.alpha) +
                   " q0=" + qsg::fmt_g17(cfg.learners.q0) + " gamma=" + qsg::fmt_g17(cfg.gamma) +
                   " intervals=" + std::to_string(cfg.intervals) +
                   " tolerance=" + qsg::fmt_g17(cfg.tolerance));
    if (policy)
        meta.push_back("policy=" + policy_path + " provenance=" +
                       std::to_string(res.provenance));
    qsg::write_summary_csv(out_dir + "/summary.csv", summary, model.game, meta, cfg.window);
    if (chart_flag && cfg.chart)
        qsg::write_profile_chart_svg(out_dir + "/profiles.svg", summary, model.game,
                                     cfg.name + ": joint action profile running means",
                                     cfg.window);
    for (int ag = 0; ag < summary.num_agents(); ++ag)
        std::printf("agent %d (%s, seat %d): normalized utility %.4f +/- %.4f\n", ag,
                    ag < summary.num_a ? "A-type" : "N-type", model.agent_seat[ag],
                    summary.utility_mean(ag), summary.utility_se(ag));
    if (summary.clipped > 0)
        std::printf("note: %zu tracked states were clipped into the grid box\n", summary.clipped);
    return 0;
}

int cmd_verify(const std::string& out_dir, std::size_t pairs, long long seed) {
    qsg::VerifySettings settings;
    if (pairs > 0) settings.pairs = pairs;
    if (seed >= 0) settings.seed = static_cast<std::uint64_t>(seed);
    const std::vector<qsg::BoundReport> reports = qsg::run_full_verification(settings);
    std::filesystem::create_directories(out_dir);
    qsg::write_bound_reports(out_dir + "/bounds_report.txt", out_dir + "/bounds_report.jsonl",
                             reports);
    int bad = 0;
    for (const qsg::BoundReport& r : reports) {
        std::printf("%-52s empirical %12.5g  bound %12.5g  %s\n", r.name.c_str(),
                    r.empirical_gap, r.theoretical_gap,
                    r.satisfied ? (r.note.empty() ? "ok" : r.note.c_str()) : "VIOLATED");
        bad += !r.satisfied;
    }
    std::printf("%zu checks, %d violated -> %s\n", reports.size(), bad, out_dir.c_str());
    return bad == 0 ? 0 : 1;
}

int cmd_reproduce(const std::string& family, const std::string& out_dir,
                  const CommonOverrides& ov, long long game_seed, bool no_chart) {
    qsg::ReproduceOptions opts;
    if (ov.trials >= 0) opts.trials = ov.trials;
    if (ov.stages >= 0) opts.stages = ov.stages;
    if (ov.seed >= 0) opts.base_seed = static_cast<std::uint64_t>(ov.seed);
    if (ov.intervals >= 0) opts.intervals_fine = opts.intervals_coarse = ov.intervals;
    if (game_seed >= 0) opts.game_seed = static_cast<std::uint64_t>(game_seed);
    opts.out_dir = out_dir;
    opts.write_files = true;
    opts.chart = !no_chart;
    const qsg::ReproduceResult res = qsg::run_reproduce(family, opts);
    for (const qsg::ConfigOutcome& oc : res.outcomes) {
        std::printf("%s:\n", oc.label.c_str());
        for (std::size_t seat = 0; seat < oc.roles.size(); ++seat) {
            const int ag = oc.model.seat_agent[seat];
            std::printf("  seat %zu %s: normalized utility %.4f +/- %.4f\n", seat,
                        oc.roles[seat] == 'A' ? "A-type" : "N-type",
                        oc.summary.utility_mean(ag), oc.summary.utility_se(ag));
        }
    }
    std::printf("outputs in %s/%s\n", out_dir.empty() ? "." : out_dir.c_str(), family.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsg: strategic play against independent Q-learners in repeated games"};
    app.require_subcommand(1);

    CommonOverrides ov;
    std::string config_path, out_dir = "out", policy_path, family;
    bool no_chart = false;
    int window = -1;
    long long game_seed = -1;
    std::size_t pairs = 0;
    long long vseed = -1;

    CLI::App* solve = app.add_subcommand("solve", "build the quantized model and solve it");
    solve->add_option("--config", config_path, "experiment config (TOML)")->required();
    solve->add_option("--out", out_dir, "output directory");
    solve->add_option("--intervals", ov.intervals, "override grid intervals");
    solve->add_option("--seed", ov.seed, "override base seed");

    CLI::App* sim = app.add_subcommand("simulate", "run seeded trials against a solved policy");
    sim->add_option("--config", config_path, "experiment config (TOML)")->required();
    sim->add_option("--policy", policy_path, "solve snapshot (required with A-type seats)");
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--trials", ov.trials, "override trial count");
    sim->add_option("--stages", ov.stages, "override stage count");
    sim->add_option("--seed", ov.seed, "override base seed");
    sim->add_option("--intervals", ov.intervals, "override grid intervals");
    sim->add_option("--window", window, "windowed instead of running means");
    sim->add_flag("--no-chart", no_chart, "skip the SVG chart");

    CLI::App* verify = app.add_subcommand("verify", "run the numerical bound verification suite");
    verify->add_option("--out", out_dir, "output directory");
    verify->add_option("--pairs", pairs, "random state pairs per check");
    verify->add_option("--seed", vseed, "verification seed");

    CLI::App* repro = app.add_subcommand("reproduce", "solve+simulate a named experiment family");
    repro->add_option("family", family, "one of: pd-1v1 zerosum-1v1 potential-aligned "
                                        "potential-misaligned table2")
        ->required();
    repro->add_option("--out", out_dir, "output directory");
    repro->add_option("--trials", ov.trials, "override trial count");
    repro->add_option("--stages", ov.stages, "override stage count");
    repro->add_option("--seed", ov.seed, "override base seed");
    repro->add_option("--game-seed", game_seed, "override game generator seed");
    repro->add_option("--intervals", ov.intervals, "override grid intervals (both scales)");
    repro->add_flag("--no-chart", no_chart, "skip SVG charts");

    try {
        app.parse(argc, argv);
        if (solve->parsed())
            return cmd_solve(config_path, out_dir, solve->count("--out") > 0, ov);
        if (sim->parsed())
            return cmd_simulate(config_path, policy_path, out_dir, sim->count("--out") > 0, ov,
                                !no_chart, window);
        if (verify->parsed()) return cmd_verify(out_dir, pairs, vseed);
        if (repro->parsed()) return cmd_reproduce(family, out_dir, ov, game_seed, no_chart);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const qsg::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const qsg::NotConvergedError& e) {
        std::fprintf(stderr, "non-convergence: %s\n", e.what());
        return 3;
    } catch (const qsg::ProvenanceError& e) {
        std::fprintf(stderr, "provenance mismatch: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
