#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grid.hpp"
#include "model.hpp"
#include "types.hpp"

namespace hjreach {

/// Closed axis-aligned box used as a level-set shape.
struct BoxSet {
    Vec3 lo{};
    Vec3 hi{};

    static BoxSet make(const Vec3& lo, const Vec3& hi)
    {
        for (int a = 0; a < 3; ++a)
            if (!(hi[a] > lo[a])) throw std::invalid_argument("BoxSet: empty box");
        return BoxSet{lo, hi};
    }
};

/// Exact Euclidean signed distance to the box: negative inside (distance to
/// the nearest face), positive outside, zero on the boundary. 1-Lipschitz.
inline double signed_distance(const BoxSet& box, const Vec3& z)
{
    double inside = -std::numeric_limits<double>::infinity();
    double outside_sq = 0.0;
    bool is_outside = false;
    for (int a = 0; a < 3; ++a) {
        const double d = std::max(box.lo[a] - z[a], z[a] - box.hi[a]);
        inside = std::max(inside, d);
        if (d > 0.0) {
            is_outside = true;
            outside_sq += d * d;
        }
    }
    return is_outside ? std::sqrt(outside_sq) : inside;
}

/// The set the controller steers into: { x <= Q, K <= K_eff, E >= E_min }
/// clipped to the domain box.
inline BoxSet target_box(const WteParams& p)
{
    return BoxSet::make(
        {p.domain_lo[0], p.domain_lo[1], std::max(p.target.e_min, p.domain_lo[2])},
        {p.target.q_cap, p.target.k_eff, p.domain_hi[2]});
}

inline BoxSet domain_box(const WteParams& p) { return BoxSet::make(p.domain_lo, p.domain_hi); }

/// Sample a box's signed distance on a grid.
inline ScalarField sample_signed_distance(const BoxSet& box, const GridSpec& spec,
                                          double time_label = 0.0)
{
    auto f = ScalarField::constant(spec, time_label, 0.0);
    for (int k = 0; k < spec.counts[2]; ++k)
        for (int j = 0; j < spec.counts[1]; ++j)
            for (int i = 0; i < spec.counts[0]; ++i)
                f.at(i, j, k) = signed_distance(box, node_coordinates(spec, {i, j, k}));
    return f;
}

/// Terminal condition max(g_Q, g_D): nonpositive exactly on nodes that are in
/// the target and inside the domain. Carries time_label = horizon.
inline ScalarField terminal_field(const WteParams& p, const GridSpec& spec)
{
    const BoxSet tgt = target_box(p);
    const BoxSet dom = domain_box(p);
    auto f = ScalarField::constant(spec, p.horizon, 0.0);
    for (int k = 0; k < spec.counts[2]; ++k)
        for (int j = 0; j < spec.counts[1]; ++j)
            for (int i = 0; i < spec.counts[0]; ++i) {
                const Vec3 z = node_coordinates(spec, {i, j, k});
                f.at(i, j, k) = std::max(signed_distance(tgt, z), signed_distance(dom, z));
            }
    return f;
}

} // namespace hjreach
