// End-to-end checks that chain solver, reach, synth and io on the production
// scenarios at desk-scale grids. Numeric bands here were measured on 21- and
// 26-node grids and are deliberately wide; resolution-specific behavior is
// noted inline.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>

#include <hjreach/io.hpp>
#include <hjreach/levelset.hpp>
#include <hjreach/presets.hpp>
#include <hjreach/reach.hpp>
#include <hjreach/solver.hpp>
#include <hjreach/synth.hpp>

#include "support/test_util.hpp"

using namespace hjreach;

namespace {

SolveResult solve_scenario(int id, int n)
{
    const ScenarioPreset pre = scenario_preset(id);
    const GridSpec g =
        GridSpec::make(pre.params.domain_lo, pre.params.domain_hi, {n, n, n});
    SolveConfig cfg;
    cfg.threads = 2;
    return solve(pre.params, g, cfg);
}

void check_trajectory_structure(const Trajectory& tr)
{
    REQUIRE(!tr.samples.empty());
    CHECK(tr.samples.front().t == 0.0);
    for (std::size_t i = 1; i < tr.samples.size(); ++i)
        CHECK(tr.samples[i].t > tr.samples[i - 1].t);
    if (tr.entry_time) {
        const auto hit = std::find_if(tr.samples.begin(), tr.samples.end(),
                                      [](const TrajectorySample& s) { return s.in_target; });
        REQUIRE(hit != tr.samples.end());
        CHECK(hit->t == *tr.entry_time);
    }
}

} // namespace

TEST_CASE("scenario 1 end to end on a 26-node grid")
{
    const ScenarioPreset pre = scenario_preset(1);
    // Sections re-enter the test case; solve once and reuse.
    static const SolveResult res = solve_scenario(1, 26);

    SECTION("snapshot ladder runs from the horizon to zero")
    {
        REQUIRE(res.snapshots.size() >= 2);
        CHECK(res.snapshots.front().time_label == pre.params.horizon);
        CHECK(res.snapshots.back().time_label == 0.0);
        for (std::size_t i = 1; i < res.snapshots.size(); ++i)
            CHECK(res.snapshots[i].time_label < res.snapshots[i - 1].time_label);
    }

    SECTION("the solved field respects the domain obstacle everywhere")
    {
        const ScalarField gd =
            sample_signed_distance(domain_box(pre.params), res.final_field.spec, 0.0);
        for (std::size_t nidx = 0; nidx < gd.values.size(); ++nidx)
            REQUIRE(res.final_field.values[nidx] >= gd.values[nidx]);
    }

    SECTION("dissipation keeps the minimum positive at this resolution")
    {
        // The true kernel is deep (analysis puts min V near -0.19), but LLF
        // smearing erodes it: measured 0.57 at 26 nodes, 0.10 at 51, negative
        // only past ~100. Pin the coarse-grid value loosely.
        const double vmin =
            *std::min_element(res.final_field.values.begin(), res.final_field.values.end());
        CHECK(vmin > 0.3);
        CHECK(vmin < 0.9);
        CHECK(brs_volume(res.final_field) == 0.0);
    }

    SECTION("a state with positive numeric value still rolls out to the target")
    {
        // (10,5,50) sits well inside the true kernel; the conservative grid
        // value stays positive here, yet the closed loop from the same solve
        // enters the target in well under two years.
        const Vec3 z{10.0, 5.0, 50.0};
        CHECK(trilinear(res.final_field, z) > 0.0);

        const Trajectory tr = simulate(pre.params, res.snapshots, z, ConstantProfile{25.0});
        check_trajectory_structure(tr);
        REQUIRE(tr.feasible);
        REQUIRE(tr.entry_time.has_value());
        CHECK(*tr.entry_time > 0.3);
        CHECK(*tr.entry_time < 1.5);
    }

    SECTION("the field survives a disk round trip bit-for-bit")
    {
        save_field(res.final_field, "integration_s1.hjvf");
        const ScalarField back = load_field("integration_s1.hjvf");
        CHECK(back.spec == res.final_field.spec);
        for (std::size_t nidx = 0; nidx < back.values.size(); ++nidx)
            REQUIRE(std::bit_cast<std::uint64_t>(back.values[nidx]) ==
                    std::bit_cast<std::uint64_t>(res.final_field.values[nidx]));

        const BrsSlice sl = extract_slice(back, 2, 50.0);
        export_csv(sl, "integration_s1_slice.csv");
        CHECK(std::filesystem::file_size("integration_s1_slice.csv") > 0);
    }
}

TEST_CASE("scenario 2 rollouts dive below the waste cap before the capacity wait")
{
    // The paper's stepwise-inflow study starts at (40,12,0). Raw bang-bang
    // feedback reproduces the initial processing surge (x drops under the cap
    // within ~0.3 years) but then chatters on the value plateau while K
    // decays, so entry within T is not guaranteed at this resolution; the
    // worst-case set for these inflow bounds is empty, so no guarantee is
    // claimed either. Assert the robust part plus trajectory invariants.
    const ScenarioPreset pre = scenario_preset(2);
    const SolveResult res = solve_scenario(2, 21);

    REQUIRE(pre.profiles.size() == 3);
    for (const DisturbanceProfile& prof : pre.profiles) {
        const Trajectory tr = simulate(pre.params, res.snapshots, {40.0, 12.0, 0.0}, prof);
        check_trajectory_structure(tr);

        double min_x = 1e300;
        double t_at_min = 0.0;
        for (const TrajectorySample& s : tr.samples)
            if (s.t <= 1.0 && s.z[0] < min_x) {
                min_x = s.z[0];
                t_at_min = s.t;
            }
        CHECK(min_x < pre.params.target.q_cap);
        CHECK(t_at_min < 0.5);
    }
}

TEST_CASE("scenario 3 stays viable under the seasonal inflow")
{
    const ScenarioPreset pre = scenario_preset(3);
    const SolveResult res = solve_scenario(3, 21);

    REQUIRE(pre.initial_states.size() == 1);
    const Trajectory tr =
        simulate(pre.params, res.snapshots, pre.initial_states[0], pre.profiles[0]);
    check_trajectory_structure(tr);

    REQUIRE(tr.feasible);
    REQUIRE(tr.entry_time.has_value());
    CHECK(*tr.entry_time > 0.3);
    CHECK(*tr.entry_time < 3.0);

    // Energy output is monotone along this rollout: the controller holds
    // q = 1 to the entry point, so production dominates dissipation.
    for (std::size_t i = 1; i < tr.samples.size(); ++i)
        CHECK(tr.samples[i].z[2] >= tr.samples[i - 1].z[2] - 1e-9);
}
