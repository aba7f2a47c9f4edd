#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace hjreach {

/// Uniform node-centred box grid. Nodes along axis `a` sit at
/// lo[a] + t * spacing(a) for t = 0 .. counts[a]-1, so both box faces carry
/// nodes and spacing(a) = (hi[a]-lo[a]) / (counts[a]-1).
struct GridSpec {
    Vec3 lo{};
    Vec3 hi{};
    Index3 counts{};

    static GridSpec make(const Vec3& lo, const Vec3& hi, const Index3& counts)
    {
        for (int a = 0; a < 3; ++a) {
            if (counts[a] < 2)
                throw std::invalid_argument("GridSpec: axis " + std::string(axis_name(a)) +
                                            " needs at least 2 nodes");
            if (!(hi[a] > lo[a]))
                throw std::invalid_argument("GridSpec: empty extent on axis " +
                                            std::string(axis_name(a)));
        }
        return GridSpec{lo, hi, counts};
    }

    /// Cubical convenience constructor: n nodes per axis.
    static GridSpec make_uniform(const Vec3& lo, const Vec3& hi, int n)
    {
        return make(lo, hi, {n, n, n});
    }

    bool operator==(const GridSpec&) const = default;

    double spacing(int axis) const { return (hi[axis] - lo[axis]) / (counts[axis] - 1); }

    Vec3 spacings() const { return {spacing(0), spacing(1), spacing(2)}; }

    /// Largest per-axis spacing; the natural length scale of the grid.
    double max_spacing() const
    {
        return std::max({spacing(0), spacing(1), spacing(2)});
    }

    std::size_t num_nodes() const
    {
        return static_cast<std::size_t>(counts[0]) * counts[1] * counts[2];
    }

    /// Flat storage index, x fastest.
    std::size_t flat(int i, int j, int k) const
    {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(counts[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(counts[1]) * k);
    }

    bool contains_index(const Index3& idx) const
    {
        for (int a = 0; a < 3; ++a)
            if (idx[a] < 0 || idx[a] >= counts[a]) return false;
        return true;
    }

    bool contains_point(const Vec3& z, double slack = 0.0) const
    {
        for (int a = 0; a < 3; ++a)
            if (z[a] < lo[a] - slack || z[a] > hi[a] + slack) return false;
        return true;
    }

    double domain_volume() const
    {
        return (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
    }

    /// Volume of one grid cell (product of spacings).
    double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
};

/// Physical coordinates of a node.
inline Vec3 node_coordinates(const GridSpec& spec, const Index3& idx)
{
    if (!spec.contains_index(idx))
        throw std::out_of_range("node_coordinates: index (" + std::to_string(idx[0]) + "," +
                                std::to_string(idx[1]) + "," + std::to_string(idx[2]) +
                                ") outside grid counts");
    Vec3 z;
    for (int a = 0; a < 3; ++a) z[a] = spec.lo[a] + idx[a] * spec.spacing(a);
    return z;
}

/// Index of the grid node closest to z (ties round half away from zero).
/// Inverse of node_coordinates for points on the grid lattice.
inline Index3 nearest_node(const GridSpec& spec, const Vec3& z)
{
    Index3 idx;
    for (int a = 0; a < 3; ++a) {
        const double t = (z[a] - spec.lo[a]) / spec.spacing(a);
        idx[a] = static_cast<int>(std::clamp<long long>(std::llround(t), 0, spec.counts[a] - 1));
    }
    return idx;
}

/// Scalar samples on a GridSpec, x-fastest flat storage. `time_label` is the
/// instant of the value function this field represents: the terminal
/// condition carries the horizon T and the fully solved field carries 0.
/// Fields are value types; solver routines never mutate their inputs.
struct ScalarField {
    GridSpec spec;
    double time_label = 0.0;
    std::vector<double> values;

    static ScalarField make(const GridSpec& spec, double time_label, std::vector<double> values)
    {
        if (values.size() != spec.num_nodes())
            throw std::invalid_argument("ScalarField: got " + std::to_string(values.size()) +
                                        " values for " + std::to_string(spec.num_nodes()) +
                                        " nodes");
        return ScalarField{spec, time_label, std::move(values)};
    }

    static ScalarField constant(const GridSpec& spec, double time_label, double v)
    {
        return ScalarField{spec, time_label, std::vector<double>(spec.num_nodes(), v)};
    }

    double at(int i, int j, int k) const { return values[spec.flat(i, j, k)]; }
    double& at(int i, int j, int k) { return values[spec.flat(i, j, k)]; }
};

/// Backward and forward difference quotients (psi_minus, psi_plus) per axis.
/// At a box face the missing neighbour is a linear-extrapolation ghost
/// (2 V[b] - V[interior]), which makes the two quotients coincide there.
inline std::pair<Vec3, Vec3> one_sided_slopes(const ScalarField& f, const Index3& idx)
{
    const GridSpec& g = f.spec;
    if (!g.contains_index(idx))
        throw std::out_of_range("one_sided_slopes: index outside grid");

    Vec3 minus, plus;
    const std::size_t strides[3] = {1, static_cast<std::size_t>(g.counts[0]),
                                    static_cast<std::size_t>(g.counts[0]) *
                                        static_cast<std::size_t>(g.counts[1])};
    const std::size_t n = g.flat(idx[0], idx[1], idx[2]);
    for (int a = 0; a < 3; ++a) {
        const double h = g.spacing(a);
        const double vc = f.values[n];
        const bool has_lo = idx[a] > 0;
        const bool has_hi = idx[a] < g.counts[a] - 1;
        if (has_lo && has_hi) {
            minus[a] = (vc - f.values[n - strides[a]]) / h;
            plus[a] = (f.values[n + strides[a]] - vc) / h;
        } else if (has_hi) {
            plus[a] = (f.values[n + strides[a]] - vc) / h;
            minus[a] = plus[a];
        } else {
            minus[a] = (vc - f.values[n - strides[a]]) / h;
            plus[a] = minus[a];
        }
    }
    return {minus, plus};
}

namespace detail {

/// Endpoint-exact linear interpolation; weights stay in [0,1] so the result
/// is a convex combination of a and b.
inline double lerp_exact(double a, double b, double t) { return a * (1.0 - t) + b * t; }

struct CellCoord {
    int cell;   // lower node index of the enclosing cell
    double t;   // fractional position in [0,1]
};

inline CellCoord locate(const GridSpec& g, int axis, double z)
{
    const double h = g.spacing(axis);
    const double s = (z - g.lo[axis]) / h;
    int cell = static_cast<int>(std::floor(s));
    cell = std::clamp(cell, 0, g.counts[axis] - 2);
    double t = std::clamp(s - cell, 0.0, 1.0);
    return {cell, t};
}

} // namespace detail

/// Trilinear interpolation of the field at z. z must lie inside the grid box
/// (a relative slack of ~1e-9 absorbs round-off from callers that walk the
/// boundary); anything further out raises std::domain_error.
inline double trilinear(const ScalarField& f, const Vec3& z)
{
    const GridSpec& g = f.spec;
    for (int a = 0; a < 3; ++a) {
        const double slack = 1e-9 * (g.hi[a] - g.lo[a]);
        if (z[a] < g.lo[a] - slack || z[a] > g.hi[a] + slack)
            throw std::domain_error("trilinear: coordinate " + std::string(axis_name(a)) + "=" +
                                    std::to_string(z[a]) + " outside grid box [" +
                                    std::to_string(g.lo[a]) + "," + std::to_string(g.hi[a]) + "]");
    }

    const auto cx = detail::locate(g, 0, z[0]);
    const auto cy = detail::locate(g, 1, z[1]);
    const auto cz = detail::locate(g, 2, z[2]);

    double plane[2];
    for (int dk = 0; dk < 2; ++dk) {
        double line[2];
        for (int dj = 0; dj < 2; ++dj) {
            const double v0 = f.values[g.flat(cx.cell, cy.cell + dj, cz.cell + dk)];
            const double v1 = f.values[g.flat(cx.cell + 1, cy.cell + dj, cz.cell + dk)];
            line[dj] = detail::lerp_exact(v0, v1, cx.t);
        }
        plane[dk] = detail::lerp_exact(line[0], line[1], cy.t);
    }
    return detail::lerp_exact(plane[0], plane[1], cz.t);
}

/// Max absolute node-wise difference. The fields must share a GridSpec, or
/// one grid must refine the other (same box, node set a superset); in the
/// mixed case the comparison runs over the coarse grid's nodes.
inline double sup_norm_diff(const ScalarField& a, const ScalarField& b)
{
    if (a.spec == b.spec) {
        double m = 0.0;
        for (std::size_t n = 0; n < a.values.size(); ++n)
            m = std::max(m, std::abs(a.values[n] - b.values[n]));
        return m;
    }

    auto refines = [](const GridSpec& fine, const GridSpec& coarse) {
        for (int ax = 0; ax < 3; ++ax) {
            if (fine.lo[ax] != coarse.lo[ax] || fine.hi[ax] != coarse.hi[ax]) return false;
            if ((fine.counts[ax] - 1) % (coarse.counts[ax] - 1) != 0) return false;
        }
        return true;
    };

    const ScalarField* fine = &a;
    const ScalarField* coarse = &b;
    if (!refines(fine->spec, coarse->spec)) {
        std::swap(fine, coarse);
        if (!refines(fine->spec, coarse->spec))
            throw std::invalid_argument(
                "sup_norm_diff: grids are neither identical nor nested refinements");
    }

    Index3 stride;
    for (int ax = 0; ax < 3; ++ax)
        stride[ax] = (fine->spec.counts[ax] - 1) / (coarse->spec.counts[ax] - 1);

    double m = 0.0;
    for (int k = 0; k < coarse->spec.counts[2]; ++k)
        for (int j = 0; j < coarse->spec.counts[1]; ++j)
            for (int i = 0; i < coarse->spec.counts[0]; ++i) {
                const double va = fine->values[fine->spec.flat(i * stride[0], j * stride[1],
                                                               k * stride[2])];
                const double vb = coarse->values[coarse->spec.flat(i, j, k)];
                m = std::max(m, std::abs(va - vb));
            }
    return m;
}

} // namespace hjreach
