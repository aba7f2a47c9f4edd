#pragma once

#include <algorithm>
#include <cmath>

#include "model.hpp"
#include "types.hpp"

namespace hjreach {

/// Analytic value of min over (q, I) of max over eta of <p, f(z, u, eta)>.
///
/// The pairing is affine in each decision variable with no cross term
/// between control and inflow, so each optimisation resolves independently
/// at an interval endpoint:
///
///   H = -beta x p_x - gamma K p_K - (alpha E + alpha_k K) p_E
///       + max(p_x eta_min, p_x eta_max)        adversarial inflow
///       + min(0, p_K I_max)                    investment switch
///       + min(0, (mu p_E - p_x) q_max K x)     processing switch
///
/// The processing term groups the -q K x p_x drain and the mu q K x p_E gain
/// into one switching weight; K x >= 0 on the domain keeps its sign fixed.
inline double hamiltonian(const WteParams& prm, const Vec3& z, const Costate& p)
{
    const double x = z[0], K = z[1], E = z[2];
    const double px = p[0], pK = p[1], pE = p[2];

    const double drift = -prm.beta * x * px - prm.gamma * K * pK -
                         (prm.alpha * E + prm.alpha_k * K) * pE;
    const double inflow = std::max(px * prm.eta_min, px * prm.eta_max);
    const double invest = std::min(0.0, pK * prm.i_max);
    const double process = std::min(0.0, (prm.mu * pE - px) * prm.q_max * K * x);
    return drift + inflow + invest + process;
}

/// Bang-bang minimiser of the pairing. Ties resolve to the active endpoint
/// (full processing, full investment), which keeps the feedback law
/// well-defined where the switching functions vanish.
inline Control optimal_control(const WteParams& prm, const Vec3& /*z*/, const Costate& p)
{
    // The processing switch (mu p_E - p_x) q K x has the sign of
    // (mu p_E - p_x) everywhere on the domain, so the state drops out.
    const double q = (prm.mu * p[2] - p[0] > 0.0) ? 0.0 : prm.q_max;
    const double i = (p[1] > 0.0) ? 0.0 : prm.i_max;
    return {q, i};
}

/// Inflow that maximises the pairing; ties resolve to the upper bound.
inline double worst_disturbance(const WteParams& prm, const Costate& p)
{
    return (p[0] >= 0.0) ? prm.eta_max : prm.eta_min;
}

/// Per-axis bound max |f_l(z, u, eta)| over the action and inflow boxes.
/// f is affine in each decision variable, so the maxima sit at endpoint
/// combinations.
inline Vec3 wave_speeds(const WteParams& prm, const Vec3& z)
{
    const double x = z[0], K = z[1], E = z[2];

    const double drain_lo = prm.beta * x;                     // q = 0
    const double drain_hi = (prm.beta + prm.q_max * K) * x;   // q = q_max
    const double cx = std::max(
        std::max(std::abs(prm.eta_min - drain_lo), std::abs(prm.eta_max - drain_lo)),
        std::max(std::abs(prm.eta_min - drain_hi), std::abs(prm.eta_max - drain_hi)));

    const double ck = std::max(std::abs(prm.gamma * K), std::abs(prm.i_max - prm.gamma * K));

    const double sink = prm.alpha * E + prm.alpha_k * K;
    const double ce = std::max(std::abs(sink), std::abs(prm.mu * prm.q_max * K * x - sink));

    return {cx, ck, ce};
}

} // namespace hjreach
