#pragma once

#include <array>
#include <cstddef>

namespace hjreach {

using Vec3 = std::array<double, 3>;
using Index3 = std::array<int, 3>;

/// Slope triple (p_x, p_K, p_E) paired with the value function gradient.
using Costate = Vec3;

/// Bang-bang control pair: processing rate q and investment rate I.
struct Control {
    double q = 0.0;
    double i = 0.0;
};

enum Axis : int { AXIS_X = 0, AXIS_K = 1, AXIS_E = 2 };

inline constexpr const char* axis_name(int axis)
{
    constexpr const char* names[3] = {"x", "K", "E"};
    return names[axis];
}

} // namespace hjreach
