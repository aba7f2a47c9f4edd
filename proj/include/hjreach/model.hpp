#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "types.hpp"

namespace hjreach {

/// Target description: the controller tries to steer the state into
/// { x <= q_cap, K <= k_eff, E >= e_min } intersected with the domain box.
struct TargetSpec {
    double q_cap = 5.0;
    double k_eff = 10.0;
    double e_min = 0.0;

    /// Tight waste cap used by the scenario studies.
    static TargetSpec strict_caps() { return {5.0, 10.0, 0.0}; }

    /// Looser waste cap (three times the strict one), same capacity ceiling.
    static TargetSpec relaxed_caps() { return {15.0, 10.0, 0.0}; }
};

/// Waste-to-energy control system
///   x' = eta - (beta + q K) x        stored waste
///   K' = I - gamma K                 processing capacity
///   E' = mu q K x - alpha E - alpha_k K   net energy output
/// with controls q in [0, q_max], I in [0, i_max] and uncertain inflow
/// eta in [eta_min, eta_max].
struct WteParams {
    double beta = 0.2;     // waste self-degradation
    double gamma = 0.2;    // capacity depreciation
    double mu = 0.8;       // energy yield per processed waste
    double alpha = 0.2;    // energy dissipation
    double alpha_k = 0.2;  // energy cost of maintaining capacity

    double q_max = 1.0;
    double i_max = 1.0;

    double eta_min = 22.5;
    double eta_max = 27.5;

    Vec3 domain_lo{0.0, 0.0, 0.0};
    Vec3 domain_hi{50.0, 20.0, 100.0};

    TargetSpec target{};

    double horizon = 30.0;

    void validate() const
    {
        auto fail = [](const std::string& msg) { throw std::invalid_argument("WteParams: " + msg); };
        if (!(eta_min > 0.0) || !(eta_max >= eta_min))
            fail("inflow bounds need 0 < eta_min <= eta_max");
        if (!(q_max > 0.0) || !(i_max > 0.0)) fail("action bounds must be positive");
        if (!(gamma > 0.0) || !(mu > 0.0) || !(alpha > 0.0))
            fail("gamma, mu, alpha must be positive");
        if (beta < 0.0 || alpha_k < 0.0) fail("beta and alpha_k must be nonnegative");
        if (!(horizon > 0.0)) fail("horizon must be positive");
        for (int a = 0; a < 3; ++a) {
            if (domain_lo[a] < 0.0) fail("domain must lie in the nonnegative orthant");
            if (!(domain_hi[a] > domain_lo[a])) fail("domain box is empty");
        }
        if (!(target.q_cap > 0.0) || !(target.k_eff > 0.0)) fail("target caps must be positive");
        if (!(target.e_min < domain_hi[2])) fail("target energy floor excludes the whole domain");
        if (target.q_cap > domain_hi[0] || target.k_eff > domain_hi[1] ||
            target.e_min < domain_lo[2])
            fail("target box must be contained in the domain box");
    }

    static WteParams defaults()
    {
        WteParams p;
        p.validate();
        return p;
    }
};

inline Vec3 dynamics_rhs(const WteParams& p, const Vec3& z, const Control& u, double eta)
{
    const double x = z[0], K = z[1], E = z[2];
    return {eta - (p.beta + u.q * K) * x,
            u.i - p.gamma * K,
            p.mu * u.q * K * x - p.alpha * E - p.alpha_k * K};
}

// --- Disturbance profiles ---------------------------------------------------

struct ConstantProfile {
    double value = 25.0;
};

/// Piecewise-constant inflow, right-continuous at the interior breakpoints:
/// value[i] holds on [edges[i], edges[i+1]), the last interval is closed.
struct StepwiseProfile {
    std::vector<double> edges;
    std::vector<double> values;

    static StepwiseProfile make(std::vector<double> edges, std::vector<double> values)
    {
        if (edges.size() < 2 || values.size() + 1 != edges.size())
            throw std::invalid_argument("StepwiseProfile: need n+1 edges for n values");
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (!(edges[i] > edges[i - 1]))
                throw std::invalid_argument("StepwiseProfile: edges must increase strictly");
        return {std::move(edges), std::move(values)};
    }
};

struct Jump {
    double t_begin = 0.0;
    double t_end = 0.0;   // half-open [t_begin, t_end)
    double delta = 0.0;
};

/// amplitude * sin^2(pi t / period) + offset + sum of active jump deltas.
struct PeriodicJumpsProfile {
    double amplitude = 20.0;
    double period = 5.0;
    double offset = 15.0;
    std::vector<Jump> jumps;
};

/// Marker: the inflow is chosen adversarially from the costate at simulation
/// time; it has no open-loop time series.
struct AdversarialProfile {
};

using DisturbanceProfile =
    std::variant<ConstantProfile, StepwiseProfile, PeriodicJumpsProfile, AdversarialProfile>;

inline double eval_profile(const StepwiseProfile& p, double t)
{
    if (t <= p.edges.front()) return p.values.front();
    if (t >= p.edges.back()) return p.values.back();
    const auto it = std::upper_bound(p.edges.begin(), p.edges.end(), t);
    return p.values[static_cast<std::size_t>(it - p.edges.begin()) - 1];
}

inline double eval_profile(const PeriodicJumpsProfile& p, double t)
{
    const double s = std::sin(std::numbers::pi * t / p.period);
    double eta = p.amplitude * s * s + p.offset;
    for (const auto& j : p.jumps)
        if (t >= j.t_begin && t < j.t_end) eta += j.delta;
    return eta;
}

inline double eval_profile(const DisturbanceProfile& profile, double t)
{
    return std::visit(
        [t](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantProfile>) {
                return p.value;
            } else if constexpr (std::is_same_v<T, AdversarialProfile>) {
                throw std::logic_error(
                    "eval_profile: adversarial inflow is resolved from the costate during "
                    "simulation, not from time");
            } else {
                return eval_profile(p, t);
            }
        },
        profile);
}

/// Smallest interval containing every value the profile can produce on
/// [0, horizon]. Used to pick solve bounds that dominate a given profile.
inline std::pair<double, double> profile_envelope(const DisturbanceProfile& profile,
                                                  double horizon)
{
    return std::visit(
        [horizon](const auto& p) -> std::pair<double, double> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantProfile>) {
                return {p.value, p.value};
            } else if constexpr (std::is_same_v<T, StepwiseProfile>) {
                const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
                return {*lo, *hi};
            } else if constexpr (std::is_same_v<T, PeriodicJumpsProfile>) {
                // sin^2 sweeps [0,1] on every period; jump windows shift the band
                double lo = p.offset, hi = p.offset + p.amplitude;
                for (const auto& j : p.jumps) {
                    if (j.t_begin >= horizon) continue;
                    lo = std::min(lo, p.offset + std::min(0.0, j.delta));
                    hi = std::max(hi, p.offset + p.amplitude + std::max(0.0, j.delta));
                }
                return {lo, hi};
            } else {
                throw std::logic_error("profile_envelope: adversarial inflow has no fixed band");
            }
        },
        profile);
}

} // namespace hjreach
