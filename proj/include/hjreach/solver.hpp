#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "grid.hpp"
#include "hamiltonian.hpp"
#include "levelset.hpp"
#include "model.hpp"
#include "types.hpp"

namespace hjreach {

struct SolveConfig {
    double cfl_safety = 0.9;   // fraction of the monotonicity-limit time step
    long max_steps = 2000000;  // refuse configurations that need more steps
    long snapshot_stride = 0;  // keep every k-th field; 0 picks ~60 snapshots
    double steady_tol = 0.0;   // stop early when a step changes less than this
    double fixed_dt = 0.0;     // 0: derive dt from the CFL bound
    int threads = 1;

    /// Optional widened inflow band for the dissipation coefficients and the
    /// CFL bound. Two solves that differ only in [eta_min, eta_max] become
    /// node-wise comparable when they share the wider band; the band must
    /// contain the model's inflow interval.
    std::optional<std::pair<double, double>> dissipation_band;
};

struct SolveResult {
    ScalarField final_field;              // time_label 0: full-horizon value
    std::vector<ScalarField> snapshots;   // decreasing time_label, horizon .. 0
    double dt_used = 0.0;
    long steps_taken = 0;
};

/// Progress callback: (completed steps, total steps, current time label,
/// sup-norm change of the last step).
using ProgressFn = std::function<void(long, long, double, double)>;

namespace detail {

struct StepStats {
    double max_abs = 0.0;
    double max_change = 0.0;
    std::size_t bad_node = SIZE_MAX;   // first node that produced a non-finite value
};

/// Per-solve constants: obstacle, drift coefficients, switching weight and
/// dissipation speeds sampled once per node.
class SolverWorkspace {
public:
    SolverWorkspace(const WteParams& prm, const GridSpec& spec,
                    const std::optional<std::pair<double, double>>& dissipation_band = {})
        : prm_(prm), spec_(spec)
    {
        WteParams cprm = prm;   // band used for the dissipation speeds only
        if (dissipation_band) {
            const auto [lo, hi] = *dissipation_band;
            if (lo > prm.eta_min || hi < prm.eta_max)
                throw std::invalid_argument(
                    "SolveConfig: dissipation band must contain the inflow interval");
            cprm.eta_min = lo;
            cprm.eta_max = hi;
        }

        const std::size_t n = spec.num_nodes();
        ax_.resize(n);
        ak_.resize(n);
        ae_.resize(n);
        w_.resize(n);
        cx_.resize(n);
        ck_.resize(n);
        ce_.resize(n);
        gd_.resize(n);

        const BoxSet dom = domain_box(prm);
        for (int k = 0; k < spec.counts[2]; ++k)
            for (int j = 0; j < spec.counts[1]; ++j)
                for (int i = 0; i < spec.counts[0]; ++i) {
                    const std::size_t at = spec.flat(i, j, k);
                    const Vec3 z = node_coordinates(spec, {i, j, k});
                    ax_[at] = -prm.beta * z[0];
                    ak_[at] = -prm.gamma * z[1];
                    ae_[at] = -(prm.alpha * z[2] + prm.alpha_k * z[1]);
                    w_[at] = prm.q_max * z[1] * z[0];
                    const Vec3 c = wave_speeds(cprm, z);
                    cx_[at] = c[0];
                    ck_[at] = c[1];
                    ce_[at] = c[2];
                    gd_[at] = signed_distance(dom, z);
                }
        for (int a = 0; a < 3; ++a) inv_h_[a] = 1.0 / spec.spacing(a);
    }

    const std::vector<double>& obstacle() const { return gd_; }

    /// Largest node-wise sum of dissipation speeds over spacings; its
    /// reciprocal is the monotonicity limit on dt. The speeds are maxima of
    /// |bilinear| terms, so the node maximum sits at a box corner.
    double speed_sum_bound() const
    {
        double worst = 0.0;
        for (int ci = 0; ci < 2; ++ci)
            for (int cj = 0; cj < 2; ++cj)
                for (int ck = 0; ck < 2; ++ck) {
                    const std::size_t at = spec_.flat(ci * (spec_.counts[0] - 1),
                                                      cj * (spec_.counts[1] - 1),
                                                      ck * (spec_.counts[2] - 1));
                    worst = std::max(worst, cx_[at] * inv_h_[0] + ck_[at] * inv_h_[1] +
                                                ce_[at] * inv_h_[2]);
                }
        return worst;
    }

    /// One Jacobi sweep of
    ///   out = max( in + dt (H(z, avg slope) + 1/2 sum_l C_l (psi+_l - psi-_l)),  floor )
    /// marching the time label toward zero. Face nodes use zero-slope ghosts
    /// on their missing side, which preserves monotonicity under the CFL
    /// bound. Node updates are independent; thread partitioning cannot change
    /// any value. A null floor means the stored domain obstacle.
    StepStats apply(const std::vector<double>& in, std::vector<double>& out, double dt,
                    int threads, const double* floor = nullptr) const
    {
        if (!floor) floor = gd_.data();
        const int nz = spec_.counts[2];
        threads = std::clamp(threads, 1, nz);

        std::vector<StepStats> parts(threads);
        auto run = [&](int t) {
            const int k0 = static_cast<int>(static_cast<long>(nz) * t / threads);
            const int k1 = static_cast<int>(static_cast<long>(nz) * (t + 1) / threads);
            parts[t] = sweep_slab(in.data(), out.data(), floor, dt, k0, k1);
        };

        if (threads == 1) {
            run(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (int t = 0; t < threads; ++t) pool.emplace_back(run, t);
            for (auto& th : pool) th.join();
        }

        StepStats total;
        for (const auto& s : parts) {
            total.max_abs = std::max(total.max_abs, s.max_abs);
            total.max_change = std::max(total.max_change, s.max_change);
            total.bad_node = std::min(total.bad_node, s.bad_node);
        }
        return total;
    }

    const GridSpec& spec() const { return spec_; }
    const WteParams& params() const { return prm_; }

private:
    StepStats sweep_slab(const double* in, double* out, const double* floor, double dt,
                         int k0, int k1) const
    {
        const int nx = spec_.counts[0];
        const int ny = spec_.counts[1];
        const int nz = spec_.counts[2];
        const std::ptrdiff_t sy = nx;
        const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(nx) * ny;
        const double ihx = inv_h_[0], ihy = inv_h_[1], ihz = inv_h_[2];
        const double eta_lo = prm_.eta_min, eta_hi = prm_.eta_max;
        const double imax = prm_.i_max, mu = prm_.mu;

        StepStats st;
        for (int k = k0; k < k1; ++k) {
            const std::ptrdiff_t okm = (k > 0) ? -sz : 0;      // offset 0 = zero-slope ghost
            const std::ptrdiff_t okp = (k < nz - 1) ? sz : 0;
            for (int j = 0; j < ny; ++j) {
                const std::ptrdiff_t ojm = (j > 0) ? -sy : 0;
                const std::ptrdiff_t ojp = (j < ny - 1) ? sy : 0;
                const std::size_t row = spec_.flat(0, j, k);
                for (int i = 0; i < nx; ++i) {
                    const std::size_t n = row + i;
                    const std::ptrdiff_t oim = (i > 0) ? -1 : 0;
                    const std::ptrdiff_t oip = (i < nx - 1) ? 1 : 0;

                    const double vc = in[n];
                    const double smx = (vc - in[n + oim]) * ihx;
                    const double spx = (in[n + oip] - vc) * ihx;
                    const double smy = (vc - in[n + ojm]) * ihy;
                    const double spy = (in[n + ojp] - vc) * ihy;
                    const double smz = (vc - in[n + okm]) * ihz;
                    const double spz = (in[n + okp] - vc) * ihz;

                    const double px = 0.5 * (smx + spx);
                    const double pk = 0.5 * (smy + spy);
                    const double pe = 0.5 * (smz + spz);

                    const double ham = ax_[n] * px + ak_[n] * pk + ae_[n] * pe +
                                       (px >= 0.0 ? px * eta_hi : px * eta_lo) +
                                       std::min(0.0, pk * imax) +
                                       std::min(0.0, (mu * pe - px) * w_[n]);
                    const double diss = 0.5 * (cx_[n] * (spx - smx) + ck_[n] * (spy - smy) +
                                               ce_[n] * (spz - smz));

                    const double cand = vc + dt * (ham + diss);
                    if (!(cand == cand) && st.bad_node == SIZE_MAX) st.bad_node = n;
                    const double v = std::max(cand, floor[n]);
                    out[n] = v;
                    st.max_abs = std::max(st.max_abs, std::abs(v));
                    st.max_change = std::max(st.max_change, std::abs(v - vc));
                }
            }
        }
        return st;
    }

    WteParams prm_;
    GridSpec spec_;
    std::vector<double> ax_, ak_, ae_, w_, cx_, ck_, ce_, gd_;
    double inv_h_[3];
};

inline std::string node_label(const GridSpec& spec, std::size_t n)
{
    const int nx = spec.counts[0];
    const int ny = spec.counts[1];
    const int i = static_cast<int>(n % nx);
    const int j = static_cast<int>((n / nx) % ny);
    const int k = static_cast<int>(n / (static_cast<std::size_t>(nx) * ny));
    return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

} // namespace detail

/// Local Lax-Friedrichs flux: the analytic Hamiltonian at the slope average
/// minus the per-axis dissipation 1/2 C_l (psi+_l - psi-_l). Coincides with
/// the analytic Hamiltonian whenever the one-sided slopes agree.
inline double llf_numerical_hamiltonian(const WteParams& prm, const Vec3& z,
                                        const Vec3& psi_minus, const Vec3& psi_plus)
{
    const Costate mid{0.5 * (psi_minus[0] + psi_plus[0]), 0.5 * (psi_minus[1] + psi_plus[1]),
                      0.5 * (psi_minus[2] + psi_plus[2])};
    const Vec3 c = wave_speeds(prm, z);
    double diss = 0.0;
    for (int a = 0; a < 3; ++a) diss += c[a] * (psi_plus[a] - psi_minus[a]);
    return hamiltonian(prm, z, mid) - 0.5 * diss;
}

/// Largest time step that keeps the update monotone, scaled by cfl_safety:
///   dt = cfl_safety / max over nodes of sum_l C_l(z) / h_l.
inline double cfl_timestep(const WteParams& prm, const GridSpec& spec, double cfl_safety = 0.9)
{
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
        throw std::invalid_argument("cfl_timestep: cfl_safety must be in (0, 1]");
    const detail::SolverWorkspace ws(prm, spec);
    const double bound = ws.speed_sum_bound();
    if (!(bound > 0.0))
        throw std::invalid_argument(
            "cfl_timestep: all dissipation speeds vanish (frozen dynamics)");
    return cfl_safety / bound;
}

/// One explicit backward step of the constrained scheme:
///   next = max( V + dt (H + dissipation), floor )
/// evaluated node-wise with zero-slope ghosts at the faces. The floor is
/// usually the domain signed distance; the output label drops by dt.
inline ScalarField step(const WteParams& prm, const ScalarField& field,
                        const ScalarField& floor_field, double dt, int threads = 1,
                        const std::optional<std::pair<double, double>>& dissipation_band = {})
{
    if (field.spec != floor_field.spec)
        throw std::invalid_argument("step: field and floor live on different grids");
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");

    const detail::SolverWorkspace ws(prm, field.spec, dissipation_band);
    ScalarField out{field.spec, field.time_label - dt,
                    std::vector<double>(field.values.size())};
    const auto stats = ws.apply(field.values, out.values, dt, threads,
                                floor_field.values.data());
    if (stats.bad_node != SIZE_MAX)
        throw numeric_error("step: non-finite update at node " +
                            detail::node_label(field.spec, stats.bad_node));
    return out;
}

/// Robust backward reach-avoid solve: initialises with the terminal
/// condition max(g_Q, g_D) at the horizon and marches the value function to
/// time 0 under worst-case inflow, projecting every step onto V >= g_D.
inline SolveResult solve(const WteParams& prm, const GridSpec& spec, const SolveConfig& cfg,
                         const ProgressFn& progress = {})
{
    if (!(cfg.cfl_safety > 0.0) || cfg.cfl_safety > 1.0)
        throw std::invalid_argument("solve: cfl_safety must be in (0, 1]");
    if (cfg.threads < 1) throw std::invalid_argument("solve: threads must be >= 1");
    if (cfg.max_steps < 1) throw std::invalid_argument("solve: max_steps must be >= 1");
    if (cfg.fixed_dt < 0.0 || cfg.snapshot_stride < 0 || cfg.steady_tol < 0.0)
        throw std::invalid_argument("solve: negative solver setting");
    if (prm.horizon < 0.0) throw std::invalid_argument("solve: negative horizon");

    const double T = prm.horizon;
    const detail::SolverWorkspace ws(prm, spec, cfg.dissipation_band);

    if (T == 0.0) {
        SolveResult res;
        res.final_field = terminal_field(prm, spec);
        res.snapshots.push_back(res.final_field);
        return res;
    }

    double dt_bound;
    if (cfg.fixed_dt > 0.0) {
        dt_bound = cfg.fixed_dt;
    } else {
        const double speed = ws.speed_sum_bound();
        // frozen dynamics: the update is the identity, one step of size T does
        dt_bound = speed > 0.0 ? cfg.cfl_safety / speed : T;
    }

    const long steps =
        std::max<long>(1, static_cast<long>(std::ceil(T / dt_bound - 1e-12)));
    if (steps > cfg.max_steps)
        throw std::invalid_argument("solve: horizon needs " + std::to_string(steps) +
                                    " steps (max_steps = " + std::to_string(cfg.max_steps) +
                                    "); coarsen the grid or raise max_steps");
    const double dt = T / static_cast<double>(steps);
    const long stride =
        cfg.snapshot_stride > 0 ? cfg.snapshot_stride : std::max<long>(1, (steps + 59) / 60);

    ScalarField terminal = terminal_field(prm, spec);

    SolveResult res;
    res.dt_used = dt;
    res.snapshots.push_back(terminal);

    std::vector<double> cur = terminal.values;
    std::vector<double> next(cur.size());

    double range0 = 0.0;
    for (double v : cur) range0 = std::max(range0, std::abs(v));
    const double blow_up = 10.0 * std::max(range0, 1.0);

    const long progress_stride = std::max<long>(1, steps / 200);

    long n = 0;
    while (n < steps) {
        const auto stats = ws.apply(cur, next, dt, cfg.threads);
        ++n;
        cur.swap(next);

        if (stats.bad_node != SIZE_MAX)
            throw numeric_error("solve: non-finite value at node " +
                                detail::node_label(spec, stats.bad_node) + " on step " +
                                std::to_string(n));
        if (stats.max_abs > blow_up)
            throw numeric_error(
                "solve: sup-norm " + std::to_string(stats.max_abs) + " exceeds 10x the terminal "
                "range after step " + std::to_string(n) + "; the time step is too large");

        const bool steady = cfg.steady_tol > 0.0 && stats.max_change < cfg.steady_tol;
        const bool last = n == steps || steady;
        const double label = (last ? 0.0 : T - static_cast<double>(n) * dt);

        if (n % stride == 0 || last)
            res.snapshots.push_back(ScalarField{spec, label, cur});
        if (progress && (n % progress_stride == 0 || last))
            progress(n, steps, label, stats.max_change);
        if (steady) break;
    }

    res.steps_taken = n;
    res.final_field = ScalarField{spec, 0.0, std::move(cur)};
    return res;
}

} // namespace hjreach
