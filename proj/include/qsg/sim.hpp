#ifndef QSG_SIM_HPP
#define QSG_SIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qsg/errors.hpp"
#include "qsg/finite_sg.hpp"
#include "qsg/game.hpp"
#include "qsg/grid.hpp"
#include "qsg/rng.hpp"
#include "qsg/value_iteration.hpp"

namespace qsg {

// One play-through of the repeated game. Agents are ordered A-types first,
// then N-types, matching the game's tensors. learner_q holds the learners'
// true estimates entering each stage; tracked_q the strategic agents'
// reconstruction of the same state from observed play (empty when no
// A-type participates).
struct Trajectory {
    int num_a = 0;
    int num_n = 0;
    std::vector<int> joint_a;
    std::vector<int> joint_b;
    std::vector<std::vector<double>> payoffs; // per stage, per agent
    std::vector<QState> learner_q;
    std::vector<QState> tracked_q;
    std::size_t clipped = 0;

    int stages() const { return static_cast<int>(joint_b.size()); }
    int num_agents() const { return num_a + num_n; }
};

// Truncated discounted payoff sum scaled by (1-gamma).
inline double normalized_utility(const Trajectory& traj, int agent, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("normalized_utility: gamma must lie in (0,1)");
    double acc = 0.0, g = 1.0;
    for (int k = 0; k < traj.stages(); ++k) {
        acc += g * traj.payoffs[k][agent];
        g *= gamma;
    }
    return (1.0 - gamma) * acc;
}

// Simulates `stages` rounds. A-types quantize their tracked state and draw
// from the solved decision rule; N-types draw from their softmax and update
// their own estimate from the realized payoff; A-types update trackers from
// the observed joint action. Each agent consumes its own RNG stream derived
// from (base_seed, trial, agent index).
inline Trajectory run_episode(const NormalFormGame& game, const LearnerParams& params,
                              const SolveResult* policy, const QuantGrid* grid, int stages,
                              std::uint64_t base_seed, std::uint64_t trial) {
    params.validate();
    const int num_a = game.num_a_types();
    const int num_n = game.num_n_types();
    if (num_a > 0) {
        if (policy == nullptr || grid == nullptr)
            throw std::invalid_argument("run_episode: A-types present but no policy/grid given");
        const std::uint64_t expect = provenance_hash(game, params, policy->gamma, *grid);
        if (policy->provenance != expect)
            throw ProvenanceError("run_episode: policy snapshot was solved for a different "
                                  "game/grid/parameter combination");
        if (static_cast<int>(policy->policies.size()) != num_a)
            throw std::invalid_argument("run_episode: policy table count mismatch");
    }

    Trajectory traj;
    traj.num_a = num_a;
    traj.num_n = num_n;
    traj.joint_a.reserve(stages);
    traj.joint_b.reserve(stages);
    traj.payoffs.reserve(stages);
    traj.learner_q.reserve(stages);
    if (num_a > 0) traj.tracked_q.reserve(stages);

    std::vector<SplitMix64> streams;
    streams.reserve(num_a + num_n);
    for (int ag = 0; ag < num_a + num_n; ++ag)
        streams.push_back(derive_stream(base_seed, trial, static_cast<std::uint64_t>(ag)));

    QState learner(game.state_dim(), params.q0);
    std::vector<QState> trackers(num_a, learner); // \hat q_0 = q_0

    std::vector<int> a_acts(num_a), b_acts(num_n);
    for (int k = 0; k < stages; ++k) {
        traj.learner_q.push_back(learner);
        if (num_a > 0) traj.tracked_q.push_back(trackers[0]);

        for (int j = 0; j < num_a; ++j) {
            bool clip = false;
            const std::size_t d = quantize(*grid, trackers[j], &clip);
            if (clip) traj.clipped += 1;
            const int nj = game.a_actions[j];
            a_acts[j] = sample_discrete(
                streams[j],
                std::span<const double>(policy->policies[j].data() + d * nj, nj));
        }
        int off = 0;
        for (int i = 0; i < num_n; ++i) {
            const MixedProfile p = softmax_policy(
                std::span<const double>(learner.data() + off, game.n_actions[i]), params.tau);
            b_acts[i] = sample_discrete(streams[num_a + i], p);
            off += game.n_actions[i];
        }
        const int ja = num_a > 0 ? game.encode_joint_a(a_acts) : 0;
        const int jb = game.encode_joint_b(b_acts);
        traj.joint_a.push_back(ja);
        traj.joint_b.push_back(jb);

        std::vector<double> pay(num_a + num_n);
        for (int j = 0; j < num_a; ++j) pay[j] = game.a_payoff(j, ja, jb);
        for (int i = 0; i < num_n; ++i) pay[num_a + i] = game.n_payoff(i, ja, jb);
        traj.payoffs.push_back(pay);

        // learners update their own block from the realized payoff
        off = 0;
        for (int i = 0; i < num_n; ++i) {
            std::vector<double> block(learner.begin() + off,
                                      learner.begin() + off + game.n_actions[i]);
            block = iql_update(std::move(block), b_acts[i], pay[num_a + i], params.alpha);
            std::copy(block.begin(), block.end(), learner.begin() + off);
            off += game.n_actions[i];
        }
        // strategic agents update trackers from the observed joint action
        for (int j = 0; j < num_a; ++j)
            trackers[j] = tracker_step(game, std::move(trackers[j]), ja, jb, params.alpha);
    }
    return traj;
}

// Aggregated trial statistics: per-stage cumulative (running-mean) joint
// action-profile frequencies averaged over trials, per-stage running-mean
// payoffs, and per-trial normalized utilities. Profile counts accumulate
// as integers, so the aggregation is exactly invariant to trial order.
struct TrialSummary {
    int stages = 0;
    int n_trials = 0;
    std::uint64_t base_seed = 0;
    double gamma = 0.0;
    int num_a = 0;
    int num_n = 0;
    int num_joint_a = 1;
    int num_joint_b = 1;
    std::vector<long long> profile_cum; // [stage*num_profiles + p], summed over trials
    std::vector<double> payoff_cum;     // [stage*num_agents + ag], summed over trials
    std::vector<std::vector<double>> utilities; // [agent][trial]
    std::size_t clipped = 0;

    int num_agents() const { return num_a + num_n; }
    int num_profiles() const { return num_joint_a * num_joint_b; }

    // running-mean frequency of a joint profile up to and including `stage`
    double freq(int stage, int profile) const {
        return static_cast<double>(
                   profile_cum[static_cast<std::size_t>(stage) * num_profiles() + profile]) /
               (static_cast<double>(stage + 1) * n_trials);
    }
    // windowed mean over the last `window` stages ending at `stage`
    double freq_window(int stage, int profile, int window) const {
        const int lo = std::max(0, stage - window + 1);
        const long long hi_c =
            profile_cum[static_cast<std::size_t>(stage) * num_profiles() + profile];
        const long long lo_c =
            lo == 0 ? 0
                    : profile_cum[static_cast<std::size_t>(lo - 1) * num_profiles() + profile];
        return static_cast<double>(hi_c - lo_c) / (static_cast<double>(stage - lo + 1) * n_trials);
    }
    // running-mean per-agent action frequency (marginal over profiles)
    double action_freq(int stage, int agent, int action, const NormalFormGame& game) const {
        double f = 0.0;
        for (int ja = 0; ja < num_joint_a; ++ja) {
            const std::vector<int> aa = game.decode_joint_a(ja);
            for (int jb = 0; jb < num_joint_b; ++jb) {
                const std::vector<int> bb = game.decode_joint_b(jb);
                const int act = agent < num_a ? aa[agent] : bb[agent - num_a];
                if (act == action) f += freq(stage, ja * num_joint_b + jb);
            }
        }
        return f;
    }
    double running_payoff(int stage, int agent) const {
        double acc = 0.0;
        for (int k = 0; k <= stage; ++k)
            acc += payoff_cum[static_cast<std::size_t>(k) * num_agents() + agent];
        return acc / (static_cast<double>(stage + 1) * n_trials);
    }
    double utility_mean(int agent) const {
        double s = 0.0;
        for (double u : utilities[agent]) s += u;
        return s / utilities[agent].size();
    }
    double utility_se(int agent) const {
        const double m = utility_mean(agent);
        double s2 = 0.0;
        for (double u : utilities[agent]) s2 += (u - m) * (u - m);
        const std::size_t n = utilities[agent].size();
        if (n < 2) return 0.0;
        return std::sqrt(s2 / (n - 1) / n);
    }
};

inline TrialSummary run_trials(const NormalFormGame& game, const LearnerParams& params,
                               const SolveResult* policy, const QuantGrid* grid, int stages,
                               int n_trials, std::uint64_t base_seed, double gamma) {
    if (n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be >= 1");
    TrialSummary s;
    s.stages = stages;
    s.n_trials = n_trials;
    s.base_seed = base_seed;
    s.gamma = gamma;
    s.num_a = game.num_a_types();
    s.num_n = game.num_n_types();
    s.num_joint_a = game.num_joint_a();
    s.num_joint_b = game.num_joint_b();
    s.profile_cum.assign(static_cast<std::size_t>(stages) * s.num_profiles(), 0);
    s.payoff_cum.assign(static_cast<std::size_t>(stages) * s.num_agents(), 0.0);
    s.utilities.assign(s.num_agents(), std::vector<double>());

    for (int trial = 0; trial < n_trials; ++trial) {
        const Trajectory traj =
            run_episode(game, params, policy, grid, stages, base_seed, trial);
        for (int k = 0; k < stages; ++k) {
            const int profile = traj.joint_a[k] * s.num_joint_b + traj.joint_b[k];
            s.profile_cum[static_cast<std::size_t>(k) * s.num_profiles() + profile] += 1;
            for (int ag = 0; ag < s.num_agents(); ++ag)
                s.payoff_cum[static_cast<std::size_t>(k) * s.num_agents() + ag] +=
                    traj.payoffs[k][ag];
        }
        for (int ag = 0; ag < s.num_agents(); ++ag)
            s.utilities[ag].push_back(normalized_utility(traj, ag, gamma));
        s.clipped += traj.clipped;
    }
    // prefix-sum the per-stage profile counts into cumulative counts
    for (int k = 1; k < stages; ++k)
        for (int p = 0; p < s.num_profiles(); ++p)
            s.profile_cum[static_cast<std::size_t>(k) * s.num_profiles() + p] +=
                s.profile_cum[static_cast<std::size_t>(k - 1) * s.num_profiles() + p];
    return s;
}

} // namespace qsg

#endif // QSG_SIM_HPP
