#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "types.hpp"

namespace hjreach {

/// Sublevel-set membership: a state belongs to the backward reachable set
/// exactly when the interpolated value is non-positive.
struct Membership {
    double value = 0.0;
    bool member = false;
};

inline Membership is_member(const ScalarField& field, const Vec3& z)
{
    const double v = trilinear(field, z);   // rejects points outside the box
    return {v, v <= 0.0};
}

/// A 2D sample of the field with one coordinate pinned. `free_axes` are the
/// two remaining coordinates in ascending order; `values` is laid out with
/// the first free axis fastest. `mask` is true exactly where value <= 0.
struct BrsSlice {
    int axis = 0;
    double level = 0.0;
    std::array<int, 2> free_axes{1, 2};
    std::array<int, 2> counts{0, 0};
    std::array<std::vector<double>, 2> coords;   // node coordinates along each free axis
    std::vector<double> values;
    std::vector<unsigned char> mask;

    std::size_t flat(int a, int b) const
    {
        return static_cast<std::size_t>(a) + static_cast<std::size_t>(counts[0]) * b;
    }
    double value_at(int a, int b) const { return values[flat(a, b)]; }
    bool member_at(int a, int b) const { return mask[flat(a, b)] != 0; }
};

inline BrsSlice extract_slice(const ScalarField& field, int axis, double level)
{
    if (axis < 0 || axis > 2) throw std::invalid_argument("extract_slice: axis must be 0, 1 or 2");
    const GridSpec& g = field.spec;
    if (level < g.lo[axis] || level > g.hi[axis])
        throw std::domain_error("extract_slice: level outside the grid along " +
                                std::string(axis_name(axis)));

    BrsSlice s;
    s.axis = axis;
    s.level = level;
    s.free_axes = axis == 0 ? std::array<int, 2>{1, 2}
                 : axis == 1 ? std::array<int, 2>{0, 2}
                             : std::array<int, 2>{0, 1};
    s.counts = {g.counts[s.free_axes[0]], g.counts[s.free_axes[1]]};
    for (int k = 0; k < 2; ++k) {
        s.coords[k].resize(s.counts[k]);
        for (int a = 0; a < s.counts[k]; ++a)
            s.coords[k][a] = g.lo[s.free_axes[k]] + a * g.spacing(s.free_axes[k]);
    }
    s.values.resize(static_cast<std::size_t>(s.counts[0]) * s.counts[1]);
    s.mask.resize(s.values.size());

    for (int b = 0; b < s.counts[1]; ++b)
        for (int a = 0; a < s.counts[0]; ++a) {
            Index3 idx{0, 0, 0};
            idx[s.free_axes[0]] = a;
            idx[s.free_axes[1]] = b;
            Vec3 z = node_coordinates(g, idx);
            z[axis] = level;
            const double v = trilinear(field, z);
            s.values[s.flat(a, b)] = v;
            s.mask[s.flat(a, b)] = v <= 0.0 ? 1 : 0;
        }
    return s;
}

/// Volume of the zero-sublevel set, counting each node as an equal share of
/// the grid box, so a field that is non-positive everywhere reports the full
/// domain volume.
inline double brs_volume(const ScalarField& field)
{
    std::size_t inside = 0;
    for (double v : field.values)
        if (v <= 0.0) ++inside;
    return static_cast<double>(inside) *
           (field.spec.domain_volume() / static_cast<double>(field.spec.num_nodes()));
}

/// Node-wise comparison of two fields on one grid. `volume_ratio` is
/// volume_b / volume_a and NaN when a's sublevel set is empty.
struct FieldComparison {
    std::size_t nodes = 0;
    double dominance_fraction = 0.0;   // fraction of nodes with a <= b + tol
    double volume_a = 0.0;
    double volume_b = 0.0;
    double volume_ratio = 0.0;
};

inline FieldComparison compare_fields(const ScalarField& a, const ScalarField& b,
                                      double tol = 0.0)
{
    if (a.spec != b.spec)
        throw std::invalid_argument("compare_fields: fields live on different grids");

    FieldComparison r;
    r.nodes = a.values.size();
    std::size_t dominated = 0;
    for (std::size_t n = 0; n < r.nodes; ++n)
        if (a.values[n] <= b.values[n] + tol) ++dominated;
    r.dominance_fraction = static_cast<double>(dominated) / static_cast<double>(r.nodes);
    r.volume_a = brs_volume(a);
    r.volume_b = brs_volume(b);
    r.volume_ratio = r.volume_b / r.volume_a;   // NaN for two empty sets
    return r;
}

} // namespace hjreach
