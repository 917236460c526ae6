#ifndef QSG_GAME_HPP
#define QSG_GAME_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsg {

// Concatenated q-estimate vectors of all learners, ordered by learner index.
using QState = std::vector<double>;

// Probability vector over one agent's action set.
using MixedProfile = std::vector<double>;

struct LearnerParams {
    double tau = 0.01;   // softmax exploration temperature
    double alpha = 0.05; // q-update step size
    double q0 = 0.0;     // initial q-estimate, identical across entries

    void validate() const {
        if (!(tau > 0.0) || !std::isfinite(tau))
            throw std::invalid_argument("LearnerParams: tau must be positive");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("LearnerParams: alpha must lie in (0,1)");
        if (!std::isfinite(q0))
            throw std::invalid_argument("LearnerParams: q0 must be finite");
    }
};

// Repeated normal-form game between strategic agents (A-types) and
// independent Q-learners (N-types). Payoff tensors are indexed by
// (joint A-action, joint N-action); joint indices are row-major over the
// agent order, A-types first, then N-types. All modules share this
// flattening.
struct NormalFormGame {
    std::vector<int> a_actions; // action count per A-type
    std::vector<int> n_actions; // action count per N-type
    // payoff tensors, one per type: size num_joint_a() * num_joint_b(),
    // entry [ja * num_joint_b() + jb]
    std::vector<std::vector<double>> a_payoffs;
    std::vector<std::vector<double>> n_payoffs;
    // declared zero-sum A-type pairs (u_first + u_second == 0)
    std::vector<std::pair<int, int>> zero_sum_pairs;

    int num_a_types() const { return static_cast<int>(a_actions.size()); }
    int num_n_types() const { return static_cast<int>(n_actions.size()); }

    int num_joint_a() const {
        int n = 1;
        for (int k : a_actions) n *= k;
        return n;
    }
    int num_joint_b() const {
        int n = 1;
        for (int k : n_actions) n *= k;
        return n;
    }

    double a_payoff(int j, int ja, int jb) const {
        return a_payoffs[j][static_cast<std::size_t>(ja) * num_joint_b() + jb];
    }
    double n_payoff(int i, int ja, int jb) const {
        return n_payoffs[i][static_cast<std::size_t>(ja) * num_joint_b() + jb];
    }

    // dimension of the q-state (sum of N-type action counts)
    int state_dim() const {
        int d = 0;
        for (int k : n_actions) d += k;
        return d;
    }
    // offset of N-type i's block inside a QState
    int n_offset(int i) const {
        int off = 0;
        for (int k = 0; k < i; ++k) off += n_actions[k];
        return off;
    }

    // decode a joint N-action index into per-type actions (row-major)
    std::vector<int> decode_joint_b(int jb) const {
        std::vector<int> acts(n_actions.size());
        for (int i = num_n_types() - 1; i >= 0; --i) {
            acts[i] = jb % n_actions[i];
            jb /= n_actions[i];
        }
        return acts;
    }
    std::vector<int> decode_joint_a(int ja) const {
        std::vector<int> acts(a_actions.size());
        for (int j = num_a_types() - 1; j >= 0; --j) {
            acts[j] = ja % a_actions[j];
            ja /= a_actions[j];
        }
        return acts;
    }
    int encode_joint_a(std::span<const int> acts) const {
        int ja = 0;
        for (int j = 0; j < num_a_types(); ++j) ja = ja * a_actions[j] + acts[j];
        return ja;
    }
    int encode_joint_b(std::span<const int> acts) const {
        int jb = 0;
        for (int i = 0; i < num_n_types(); ++i) jb = jb * n_actions[i] + acts[i];
        return jb;
    }

    double max_abs_payoff() const {
        double m = 0.0;
        for (const auto& t : a_payoffs)
            for (double u : t) m = std::max(m, std::abs(u));
        for (const auto& t : n_payoffs)
            for (double u : t) m = std::max(m, std::abs(u));
        return m;
    }

    // Per-coordinate q-state bounds: the update keeps every entry of
    // N-type i inside the hull of {q0} and that type's payoffs.
    void state_bounds(double q0, std::vector<double>& lower, std::vector<double>& upper) const {
        lower.clear();
        upper.clear();
        for (int i = 0; i < num_n_types(); ++i) {
            double lo = q0, hi = q0;
            for (double u : n_payoffs[i]) {
                lo = std::min(lo, u);
                hi = std::max(hi, u);
            }
            for (int k = 0; k < n_actions[i]; ++k) {
                lower.push_back(lo);
                upper.push_back(hi);
            }
        }
    }

    void validate() const {
        if (a_payoffs.size() != a_actions.size() || n_payoffs.size() != n_actions.size())
            throw std::invalid_argument("NormalFormGame: payoff tensor count mismatch");
        for (int k : a_actions)
            if (k < 1) throw std::invalid_argument("NormalFormGame: empty A action set");
        for (int k : n_actions)
            if (k < 1) throw std::invalid_argument("NormalFormGame: empty N action set");
        const std::size_t cells =
            static_cast<std::size_t>(num_joint_a()) * static_cast<std::size_t>(num_joint_b());
        for (const auto& t : a_payoffs) {
            if (t.size() != cells)
                throw std::invalid_argument("NormalFormGame: A payoff tensor has wrong shape");
            for (double u : t)
                if (!std::isfinite(u))
                    throw std::invalid_argument("NormalFormGame: non-finite A payoff");
        }
        for (const auto& t : n_payoffs) {
            if (t.size() != cells)
                throw std::invalid_argument("NormalFormGame: N payoff tensor has wrong shape");
            for (double u : t)
                if (!std::isfinite(u))
                    throw std::invalid_argument("NormalFormGame: non-finite N payoff");
        }
        for (auto [j1, j2] : zero_sum_pairs) {
            if (j1 < 0 || j2 < 0 || j1 >= num_a_types() || j2 >= num_a_types() || j1 == j2)
                throw std::invalid_argument("NormalFormGame: bad zero-sum pair indices");
            for (std::size_t c = 0; c < cells; ++c)
                if (std::abs(a_payoffs[j1][c] + a_payoffs[j2][c]) > 1e-12)
                    throw std::invalid_argument(
                        "NormalFormGame: declared zero-sum pair has mismatched tensors");
        }
    }
};

// Softmax action-selection distribution sigma(q). Computed in log space
// with max subtraction; naive exponentiation overflows at tau = 0.01 for
// payoff-scale estimates.
inline MixedProfile softmax_policy(std::span<const double> q, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("softmax_policy: tau must be positive");
    if (q.empty()) throw std::invalid_argument("softmax_policy: empty input");
    double m = -std::numeric_limits<double>::infinity();
    for (double x : q) {
        if (!std::isfinite(x)) throw std::invalid_argument("softmax_policy: non-finite input");
        m = std::max(m, x);
    }
    MixedProfile p(q.size());
    double z = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        p[k] = std::exp((q[k] - m) / tau);
        z += p[k];
    }
    for (double& x : p) x /= z;
    return p;
}

// One q-learning step: moves the chosen entry toward the received payoff.
inline std::vector<double> iql_update(std::vector<double> q, int chosen, double payoff,
                                      double alpha) {
    if (chosen < 0 || static_cast<std::size_t>(chosen) >= q.size())
        throw std::invalid_argument("iql_update: action index out of range");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("iql_update: alpha must lie in (0,1)");
    if (!std::isfinite(payoff)) throw std::invalid_argument("iql_update: non-finite payoff");
    q[chosen] += alpha * (payoff - q[chosen]);
    return q;
}

// Advance a full q-state given one observed joint action: every learner's
// block gets the update it would apply itself. Feeding the observed play
// into this reproduces the learners' estimates exactly, which is what the
// strategic agents' trackers rely on.
inline QState tracker_step(const NormalFormGame& game, QState tracker, int joint_a, int joint_b,
                           double alpha) {
    const std::vector<int> bacts = game.decode_joint_b(joint_b);
    int off = 0;
    for (int i = 0; i < game.num_n_types(); ++i) {
        const double payoff = game.n_payoff(i, joint_a, joint_b);
        const int k = off + bacts[i];
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("tracker_step: alpha must lie in (0,1)");
        tracker[k] += alpha * (payoff - tracker[k]);
        off += game.n_actions[i];
    }
    return tracker;
}

// Product distribution over joint N-actions induced by the state
// (each learner samples its own softmax independently).
inline std::vector<double> joint_policy(const NormalFormGame& game, const QState& z, double tau) {
    std::vector<MixedProfile> per_type;
    per_type.reserve(game.num_n_types());
    int off = 0;
    for (int i = 0; i < game.num_n_types(); ++i) {
        per_type.push_back(
            softmax_policy(std::span<const double>(z.data() + off, game.n_actions[i]), tau));
        off += game.n_actions[i];
    }
    const int nb = game.num_joint_b();
    std::vector<double> pi(nb, 1.0);
    for (int jb = 0; jb < nb; ++jb) {
        int rem = jb;
        for (int i = game.num_n_types() - 1; i >= 0; --i) {
            pi[jb] *= per_type[i][rem % game.n_actions[i]];
            rem /= game.n_actions[i];
        }
    }
    return pi;
}

// Expected stage payoff of A-type j at state z under joint A-action ja:
// exact finite sum over joint N-actions, no sampling.
inline double expected_reward(const NormalFormGame& game, const QState& z, int joint_a, int j,
                              double tau) {
    const std::vector<double> pi = joint_policy(game, z, tau);
    double r = 0.0;
    for (int jb = 0; jb < game.num_joint_b(); ++jb) r += pi[jb] * game.a_payoff(j, joint_a, jb);
    return r;
}

} // namespace qsg

#endif // QSG_GAME_HPP
