#pragma once

#include <random>
#include <vector>

#include <hjreach/grid.hpp>

namespace testutil {

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& g, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline hjreach::ScalarField random_field(const hjreach::GridSpec& spec, std::mt19937_64& g,
                                         double lo = -5.0, double hi = 5.0,
                                         double time_label = 0.0)
{
    std::vector<double> v(spec.num_nodes());
    for (auto& x : v) x = uniform(g, lo, hi);
    return hjreach::ScalarField::make(spec, time_label, std::move(v));
}

/// Sample an arbitrary callable f(x,K,E) onto a grid.
template <class F>
hjreach::ScalarField sampled_field(const hjreach::GridSpec& spec, F&& f, double time_label = 0.0)
{
    std::vector<double> v(spec.num_nodes());
    for (int k = 0; k < spec.counts[2]; ++k)
        for (int j = 0; j < spec.counts[1]; ++j)
            for (int i = 0; i < spec.counts[0]; ++i) {
                const auto z = hjreach::node_coordinates(spec, {i, j, k});
                v[spec.flat(i, j, k)] = f(z[0], z[1], z[2]);
            }
    return hjreach::ScalarField::make(spec, time_label, std::move(v));
}

inline hjreach::Vec3 random_point(const hjreach::GridSpec& spec, std::mt19937_64& g)
{
    return {uniform(g, spec.lo[0], spec.hi[0]), uniform(g, spec.lo[1], spec.hi[1]),
            uniform(g, spec.lo[2], spec.hi[2])};
}

} // namespace testutil
