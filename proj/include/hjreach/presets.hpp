#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"
#include "types.hpp"

namespace hjreach {

/// Canned study settings: inflow bounds for the robust solve, representative
/// inflow realizations to play back in simulation, and the initial states the
/// scenario examines.
struct ScenarioPreset {
    int id = 0;
    WteParams params;
    std::vector<DisturbanceProfile> profiles;
    std::vector<Vec3> initial_states;
};

/// Initial states of the entry-time study, ordered by expected entry time.
inline std::array<Vec3, 3> entry_study_states()
{
    return {Vec3{40.0, 10.0, 0.0}, Vec3{5.0, 12.0, 0.0}, Vec3{35.0, 20.0, 0.0}};
}

/// The per-decade stepwise inflow realizations of the uncertain-inflow study:
/// early peak, middle peak, and late recovery, all within +-10% of 25.
inline std::vector<DisturbanceProfile> stepwise_profiles()
{
    const std::vector<double> edges{0.0, 10.0, 20.0, 30.0};
    return {StepwiseProfile::make(edges, {27.5, 25.0, 22.5}),
            StepwiseProfile::make(edges, {25.0, 27.5, 22.5}),
            StepwiseProfile::make(edges, {22.5, 27.5, 25.0})};
}

/// Seasonal inflow with two jump windows: 20 sin^2(pi t / 5) + 15, +5 on
/// [10,20) and -3 on [20,30).
inline PeriodicJumpsProfile seasonal_profile()
{
    PeriodicJumpsProfile p;
    p.amplitude = 20.0;
    p.period = 5.0;
    p.offset = 15.0;
    p.jumps = {Jump{10.0, 20.0, 5.0}, Jump{20.0, 30.0, -3.0}};
    return p;
}

/// Scenario presets:
///   1 - constant nominal inflow (eta = 25), entry-time study states
///   2 - +-10% inflow uncertainty with the three stepwise realizations
///   3 - seasonal inflow with jumps; solve bounds cover the profile envelope
inline ScenarioPreset scenario_preset(int id)
{
    ScenarioPreset s;
    s.id = id;
    s.params = WteParams::defaults();
    switch (id) {
    case 1: {
        s.params.eta_min = 25.0;
        s.params.eta_max = 25.0;
        s.profiles = {ConstantProfile{25.0}};
        const auto states = entry_study_states();
        s.initial_states.assign(states.begin(), states.end());
        break;
    }
    case 2:
        s.params.eta_min = 22.5;
        s.params.eta_max = 27.5;
        s.profiles = stepwise_profiles();
        s.initial_states = {Vec3{40.0, 12.0, 0.0}};
        break;
    case 3: {
        const PeriodicJumpsProfile p = seasonal_profile();
        const auto [lo, hi] = profile_envelope(p, s.params.horizon);
        s.params.eta_min = lo;
        s.params.eta_max = hi;
        s.profiles = {p};
        s.initial_states = {Vec3{5.0, 12.0, 0.0}};
        break;
    }
    default:
        throw std::invalid_argument("scenario_preset: unknown scenario " + std::to_string(id));
    }
    s.params.validate();
    return s;
}

} // namespace hjreach
