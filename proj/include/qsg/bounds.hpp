#ifndef QSG_BOUNDS_HPP
#define QSG_BOUNDS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsg/game.hpp"
#include "qsg/grid.hpp"
#include "qsg/rng.hpp"

namespace qsg {

struct LipschitzConstants {
    double m_kappa = 0.0; // finite-horizon value bound
    double l_kappa = 0.0; // finite-horizon Lipschitz constant (w.r.t. ||.||_1)
    double l0 = 0.0;      // reward Lipschitz constant
};

inline double lipschitz_l0(double tau, int b_total, double max_abs_u) {
    return std::sqrt(static_cast<double>(b_total)) / tau * max_abs_u;
}

// Closed form L_kappa = L_0 * sum_{l=0..kappa} (l+1) gamma^l.
inline double lipschitz_l_closed_form(int kappa, double gamma, double tau, int b_total,
                                      double max_abs_u) {
    const double l0 = lipschitz_l0(tau, b_total, max_abs_u);
    double s = 0.0, g = 1.0;
    for (int l = 0; l <= kappa; ++l) {
        s += (l + 1) * g;
        g *= gamma;
    }
    return l0 * s;
}

// M_kappa and L_kappa of the horizon-kappa minimax value, L by the
// recursion L_k = gamma*L_{k-1} + L_0*(1-gamma^{k+1})/(1-gamma), verified
// against the closed form on every call.
inline LipschitzConstants lipschitz_constants(int kappa, double gamma, double tau, int b_total,
                                              double max_abs_u) {
    if (kappa < 0) throw std::invalid_argument("lipschitz_constants: kappa must be >= 0");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("lipschitz_constants: gamma must lie in (0,1)");
    LipschitzConstants c;
    c.l0 = lipschitz_l0(tau, b_total, max_abs_u);
    c.m_kappa = (1.0 - std::pow(gamma, kappa + 1)) / (1.0 - gamma) * max_abs_u;
    double l = c.l0;
    for (int k = 1; k <= kappa; ++k)
        l = gamma * l + c.l0 * (1.0 - std::pow(gamma, k + 1)) / (1.0 - gamma);
    c.l_kappa = l;
    const double closed = lipschitz_l_closed_form(kappa, gamma, tau, b_total, max_abs_u);
    if (std::abs(c.l_kappa - closed) > 1e-9 * std::max(1.0, std::abs(closed)))
        throw std::logic_error("lipschitz_constants: recursion and closed form disagree");
    return c;
}

// Right-hand side of the quantization error bound:
// Delta*sqrt(|B|) / (tau*(1-gamma)^3) * max|u|.
inline double quantization_error_bound(double delta, double gamma, double tau, int b_total,
                                       double max_abs_u) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("quantization_error_bound: gamma must lie in (0,1)");
    if (!(tau > 0.0)) throw std::invalid_argument("quantization_error_bound: tau must be > 0");
    const double om = 1.0 - gamma;
    return delta * std::sqrt(static_cast<double>(b_total)) / (tau * om * om * om) * max_abs_u;
}

struct BoundReport {
    std::string name;
    int kappa = -1; // -1 for horizon-independent checks
    double m_kappa = 0.0;
    double l_kappa = 0.0;
    double l0 = 0.0;
    double delta = 0.0;
    double theoretical_gap = 0.0;
    double empirical_gap = 0.0;
    bool satisfied = false;
    std::string note;

    static BoundReport make(std::string name, int kappa, double theoretical, double empirical) {
        BoundReport r;
        r.name = std::move(name);
        r.kappa = kappa;
        r.theoretical_gap = theoretical;
        r.empirical_gap = empirical;
        r.satisfied = empirical <= theoretical + 1e-9;
        return r;
    }
};

struct LipschitzCheckResult {
    double max_ratio = 0.0;   // worst observed |lhs| / distance
    std::size_t violations = 0;
    std::size_t pairs = 0;
    bool satisfied = true;
};

// Checks |v(d) - v(d')| <= L * ||center(d) - center(d')||_1 + slack over
// all axis-adjacent grid cell pairs. The slack accounts for the value
// living on the quantized surrogate rather than the continuum.
inline LipschitzCheckResult verify_value_lipschitz(const std::vector<double>& values,
                                                   const QuantGrid& grid, double l_kappa,
                                                   double slack = 0.0) {
    if (values.size() != grid.num_states())
        throw std::invalid_argument("verify_value_lipschitz: value table size mismatch");
    LipschitzCheckResult res;
    std::vector<std::size_t> strides(grid.dim(), 1);
    for (int k = grid.dim() - 2; k >= 0; --k)
        strides[k] = strides[k + 1] * static_cast<std::size_t>(grid.cells[k + 1]);
    for (std::size_t d = 0; d < grid.num_states(); ++d) {
        const std::vector<int> c = grid.coords(d);
        for (int k = 0; k < grid.dim(); ++k) {
            if (c[k] + 1 >= grid.cells[k]) continue;
            const std::size_t d2 = d + strides[k];
            const double dist = (grid.upper[k] - grid.lower[k]) / grid.cells[k];
            const double lhs = std::abs(values[d] - values[d2]);
            res.pairs += 1;
            if (dist > 0.0) res.max_ratio = std::max(res.max_ratio, lhs / dist);
            if (lhs > l_kappa * dist + slack + 1e-12) res.violations += 1;
        }
    }
    res.satisfied = res.violations == 0;
    return res;
}

namespace detail {

inline QState random_state(SplitMix64& rng, const std::vector<double>& lo,
                           const std::vector<double>& hi) {
    QState z(lo.size());
    for (std::size_t k = 0; k < z.size(); ++k)
        z[k] = lo[k] + rng.next_double() * (hi[k] - lo[k]);
    return z;
}

inline double l1_dist(const QState& a, const QState& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return s;
}

} // namespace detail

// ||pi(z) - pi(zbar)||_1 <= sqrt(|B|)/tau * ||z - zbar||_1 on random state
// pairs from the box.
inline LipschitzCheckResult check_policy_lipschitz(const NormalFormGame& game, double tau,
                                                   std::size_t n_pairs, std::uint64_t seed) {
    std::vector<double> lo, hi;
    game.state_bounds(0.0, lo, hi);
    const double c = std::sqrt(static_cast<double>(game.num_joint_b())) / tau;
    SplitMix64 rng(seed);
    LipschitzCheckResult res;
    for (std::size_t t = 0; t < n_pairs; ++t) {
        const QState z = detail::random_state(rng, lo, hi);
        const QState zb = detail::random_state(rng, lo, hi);
        const double dist = detail::l1_dist(z, zb);
        if (dist == 0.0) continue;
        const std::vector<double> p = joint_policy(game, z, tau);
        const std::vector<double> pb = joint_policy(game, zb, tau);
        double lhs = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) lhs += std::abs(p[k] - pb[k]);
        res.pairs += 1;
        res.max_ratio = std::max(res.max_ratio, lhs / dist);
        if (lhs > c * dist + 1e-12) res.violations += 1;
    }
    res.satisfied = res.violations == 0;
    return res;
}

// |r_j(z,a) - r_j(zbar,a)| <= L_0 ||z - zbar||_1 for every A-type and
// joint A-action.
inline LipschitzCheckResult check_reward_lipschitz(const NormalFormGame& game, double tau,
                                                   std::size_t n_pairs, std::uint64_t seed) {
    std::vector<double> lo, hi;
    game.state_bounds(0.0, lo, hi);
    const double l0 = lipschitz_l0(tau, game.num_joint_b(), game.max_abs_payoff());
    SplitMix64 rng(seed);
    LipschitzCheckResult res;
    for (std::size_t t = 0; t < n_pairs; ++t) {
        const QState z = detail::random_state(rng, lo, hi);
        const QState zb = detail::random_state(rng, lo, hi);
        const double dist = detail::l1_dist(z, zb);
        if (dist == 0.0) continue;
        res.pairs += 1;
        for (int j = 0; j < game.num_a_types(); ++j) {
            for (int ja = 0; ja < game.num_joint_a(); ++ja) {
                const double lhs = std::abs(expected_reward(game, z, ja, j, tau) -
                                            expected_reward(game, zb, ja, j, tau));
                res.max_ratio = std::max(res.max_ratio, lhs / dist);
                if (lhs > l0 * dist + 1e-12) res.violations += 1;
            }
        }
    }
    res.satisfied = res.violations == 0;
    return res;
}

// For every joint action, one learner update is a contraction in ||.||_1:
// ||next(z) - next(zbar)||_1 <= ||z - zbar||_1.
inline LipschitzCheckResult check_next_state_contraction(const NormalFormGame& game,
                                                         const LearnerParams& params,
                                                         std::size_t n_pairs,
                                                         std::uint64_t seed) {
    std::vector<double> lo, hi;
    game.state_bounds(params.q0, lo, hi);
    SplitMix64 rng(seed);
    LipschitzCheckResult res;
    for (std::size_t t = 0; t < n_pairs; ++t) {
        const QState z = detail::random_state(rng, lo, hi);
        const QState zb = detail::random_state(rng, lo, hi);
        const double dist = detail::l1_dist(z, zb);
        if (dist == 0.0) continue;
        res.pairs += 1;
        for (int ja = 0; ja < game.num_joint_a(); ++ja) {
            for (int jb = 0; jb < game.num_joint_b(); ++jb) {
                const QState zn = tracker_step(game, z, ja, jb, params.alpha);
                const QState zbn = tracker_step(game, zb, ja, jb, params.alpha);
                const double lhs = detail::l1_dist(zn, zbn);
                res.max_ratio = std::max(res.max_ratio, lhs / dist);
                if (lhs > dist + 1e-12) res.violations += 1;
            }
        }
    }
    res.satisfied = res.violations == 0;
    return res;
}

// Kernel-integral bound on bounded Lipschitz test functions built as
// scaled distance-to-point maps eta(z) = c * ||z - z_p||_1:
// |E_pi(z) eta(next) - E_pi(zbar) eta(next)| <= (K + sqrt(|B|)/tau * M) d.
inline LipschitzCheckResult check_kernel_integral_bound(const NormalFormGame& game,
                                                        const LearnerParams& params,
                                                        std::size_t n_pairs,
                                                        std::uint64_t seed) {
    std::vector<double> lo, hi;
    game.state_bounds(params.q0, lo, hi);
    const double sb = std::sqrt(static_cast<double>(game.num_joint_b()));
    SplitMix64 rng(seed);
    LipschitzCheckResult res;
    for (std::size_t t = 0; t < n_pairs; ++t) {
        const QState z = detail::random_state(rng, lo, hi);
        const QState zb = detail::random_state(rng, lo, hi);
        const double dist = detail::l1_dist(z, zb);
        if (dist == 0.0) continue;
        // random test function: K-Lipschitz, bounded by K * max ||.-z_p||_1
        const QState zp = detail::random_state(rng, lo, hi);
        const double k_lip = 0.5 + 1.5 * rng.next_double();
        double eta_max = 0.0;
        for (std::size_t c = 0; c < zp.size(); ++c)
            eta_max += std::max(std::abs(lo[c] - zp[c]), std::abs(hi[c] - zp[c]));
        eta_max *= k_lip;
        auto eta = [&](const QState& x) { return k_lip * detail::l1_dist(x, zp); };

        const std::vector<double> pi = joint_policy(game, z, params.tau);
        const std::vector<double> pib = joint_policy(game, zb, params.tau);
        const double rhs = (k_lip + sb / params.tau * eta_max) * dist;
        res.pairs += 1;
        for (int ja = 0; ja < game.num_joint_a(); ++ja) {
            double lhs = 0.0;
            for (int jb = 0; jb < game.num_joint_b(); ++jb) {
                lhs += pi[jb] * eta(tracker_step(game, z, ja, jb, params.alpha));
                lhs -= pib[jb] * eta(tracker_step(game, zb, ja, jb, params.alpha));
            }
            lhs = std::abs(lhs);
            res.max_ratio = std::max(res.max_ratio, lhs / rhs);
            if (lhs > rhs + 1e-12) res.violations += 1;
        }
    }
    res.satisfied = res.violations == 0;
    return res;
}

} // namespace qsg

#endif // QSG_BOUNDS_HPP
