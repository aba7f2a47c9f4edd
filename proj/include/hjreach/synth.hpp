#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "grid.hpp"
#include "hamiltonian.hpp"
#include "levelset.hpp"
#include "model.hpp"
#include "types.hpp"

namespace hjreach {

struct TrajectorySample {
    double t = 0.0;
    Vec3 z{0.0, 0.0, 0.0};   // true state, even when outside the domain
    Control u;
    double eta = 0.0;
    double value = 0.0;      // interpolated V at the box-clamped state
    bool in_domain = false;
    bool in_target = false;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;     // strictly increasing t from 0
    std::optional<double> entry_time;          // first sample inside the target
    bool feasible = false;   // entered the target with every prior sample in the domain
};

/// Gradient of the interpolated field by central differences with one grid
/// spacing of offset per axis; offsets are clamped to the grid box, which
/// degrades to a one-sided difference on the boundary faces.
inline Costate value_gradient(const ScalarField& field, const Vec3& z)
{
    const GridSpec& g = field.spec;
    Costate grad{0.0, 0.0, 0.0};
    for (int a = 0; a < 3; ++a) {
        Vec3 zp = z, zm = z;
        zp[a] = std::min(z[a] + g.spacing(a), g.hi[a]);
        zm[a] = std::max(z[a] - g.spacing(a), g.lo[a]);
        grad[a] = (trilinear(field, zp) - trilinear(field, zm)) / (zp[a] - zm[a]);
    }
    return grad;
}

namespace detail {

/// Snapshot whose time label is nearest to t; the earliest such snapshot in
/// stored order wins ties, keeping the choice deterministic.
inline const ScalarField& nearest_snapshot(const std::vector<ScalarField>& snapshots, double t)
{
    const ScalarField* best = &snapshots.front();
    double gap = std::abs(best->time_label - t);
    for (const auto& s : snapshots) {
        const double d = std::abs(s.time_label - t);
        if (d < gap) {
            gap = d;
            best = &s;
        }
    }
    return *best;
}

inline Vec3 clamp_to_box(const GridSpec& g, const Vec3& z)
{
    return {std::clamp(z[0], g.lo[0], g.hi[0]), std::clamp(z[1], g.lo[1], g.hi[1]),
            std::clamp(z[2], g.lo[2], g.hi[2])};
}

inline bool inside_box(const GridSpec& g, const Vec3& z)
{
    for (int a = 0; a < 3; ++a)
        if (z[a] < g.lo[a] || z[a] > g.hi[a]) return false;
    return true;
}

} // namespace detail

/// Bang-bang feedback law: pick the snapshot with time label nearest T - t,
/// estimate the costate at z, and take the control vertex that minimises the
/// Hamiltonian. Early in a rollout this consults the short-march fields near
/// the terminal condition, whose gradients are sharp; the long-march fields
/// are numerically flattened by the scheme's dissipation and only matter
/// late, when a reachable rollout has already entered the target.
inline Control feedback(const WteParams& prm, const std::vector<ScalarField>& snapshots,
                        double t, const Vec3& z)
{
    if (snapshots.empty()) throw std::invalid_argument("feedback: no value snapshots");
    const ScalarField& field = detail::nearest_snapshot(snapshots, prm.horizon - t);
    if (!detail::inside_box(field.spec, z))
        throw std::domain_error("feedback: state outside the grid box");
    return optimal_control(prm, z, value_gradient(field, z));
}

/// Closed-loop rollout under a disturbance profile. Controls come from the
/// value-gradient feedback and are held constant across each integration
/// step (classical 4-stage Runge-Kutta); an adversarial profile plays the
/// worst inflow for the current costate, also held per step. The rollout
/// stops at the first sample inside the target, or at the horizon. Leaving
/// the domain does not stop it, but clears `feasible`; field lookups clamp
/// the state to the grid box.
inline Trajectory simulate(const WteParams& prm, const std::vector<ScalarField>& snapshots,
                           const Vec3& z0, const DisturbanceProfile& profile,
                           double dt_sim = 0.0)
{
    if (snapshots.empty()) throw std::invalid_argument("simulate: no value snapshots");
    const GridSpec& g = snapshots.front().spec;
    for (const auto& s : snapshots)
        if (s.spec != g) throw std::invalid_argument("simulate: snapshots on mixed grids");

    if (dt_sim < 0.0 || dt_sim != dt_sim)
        throw std::invalid_argument("simulate: dt_sim must be positive");
    const double T = prm.horizon;
    const double dt = dt_sim > 0.0 ? dt_sim : T / 3000.0;

    const BoxSet domain = domain_box(prm);
    const BoxSet target = target_box(prm);
    if (signed_distance(domain, z0) > 0.0)
        throw std::domain_error("simulate: initial state outside the domain");

    const bool adversarial = std::holds_alternative<AdversarialProfile>(profile);

    Trajectory traj;
    Vec3 z = z0;
    double t = 0.0;

    while (true) {
        const Vec3 zq = detail::clamp_to_box(g, z);
        const ScalarField& field = detail::nearest_snapshot(snapshots, T - t);
        const Costate grad = value_gradient(field, zq);
        const Control u = optimal_control(prm, zq, grad);
        const double eta_held = adversarial ? worst_disturbance(prm, grad) : 0.0;

        TrajectorySample s;
        s.t = t;
        s.z = z;
        s.u = u;
        s.eta = adversarial ? eta_held : eval_profile(profile, t);
        s.value = trilinear(field, zq);
        s.in_domain = signed_distance(domain, z) <= 0.0;
        s.in_target = signed_distance(target, z) <= 0.0;
        traj.samples.push_back(s);

        if (s.in_target) {
            traj.entry_time = t;
            break;
        }
        if (t >= T) break;

        const double h = std::min(dt, T - t);
        auto inflow = [&](double tau) { return adversarial ? eta_held : eval_profile(profile, tau); };
        const Vec3 k1 = dynamics_rhs(prm, z, u, inflow(t));
        const Vec3 mid1{z[0] + 0.5 * h * k1[0], z[1] + 0.5 * h * k1[1], z[2] + 0.5 * h * k1[2]};
        const Vec3 k2 = dynamics_rhs(prm, mid1, u, inflow(t + 0.5 * h));
        const Vec3 mid2{z[0] + 0.5 * h * k2[0], z[1] + 0.5 * h * k2[1], z[2] + 0.5 * h * k2[2]};
        const Vec3 k3 = dynamics_rhs(prm, mid2, u, inflow(t + 0.5 * h));
        const Vec3 end{z[0] + h * k3[0], z[1] + h * k3[1], z[2] + h * k3[2]};
        const Vec3 k4 = dynamics_rhs(prm, end, u, inflow(t + h));

        for (int a = 0; a < 3; ++a)
            z[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        t = (T - t <= dt) ? T : t + dt;

        if (!(z[0] == z[0]) || !(z[1] == z[1]) || !(z[2] == z[2]))
            throw numeric_error("simulate: state became non-finite at t = " + std::to_string(t));
    }

    bool clean = true;
    for (const auto& s : traj.samples) clean = clean && s.in_domain;
    traj.feasible = traj.entry_time.has_value() && clean;
    return traj;
}

} // namespace hjreach
