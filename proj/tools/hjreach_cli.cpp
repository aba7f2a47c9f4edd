// Command-line front end for the WtE reach-avoid library.
//
// Subcommands:
//   solve        march the value function, write value.hjvf plus a summary
//   slice        cut a 2-D CSV slice out of a saved field
//   query        interpolate a saved field at one state
//   volume       sublevel-set volume of a saved field
//   compare      node-wise comparison of two saved fields
//   simulate     closed-loop rollouts, writing one CSV per trajectory
//   entry-times  target entry times for the configured initial states
//
// Configuration comes from an optional JSON file plus flags; flags win over
// file keys. A scenario preset (1, 2 or 3) fixes only the inflow bounds, the
// target caps and the horizon, and seeds default inflow profiles and initial
// states; explicit config keys win over the preset.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <hjreach/io.hpp>
#include <hjreach/levelset.hpp>
#include <hjreach/presets.hpp>
#include <hjreach/reach.hpp>
#include <hjreach/solver.hpp>
#include <hjreach/synth.hpp>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace hjreach;

using detail::fmt_g9;

[[noreturn]] void config_fail(const std::string& msg) { throw std::invalid_argument(msg); }

double to_double(const std::string& text, const std::string& what)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        config_fail(what + ": \"" + text + "\" is not a number");
    }
    if (pos != text.size()) config_fail(what + ": \"" + text + "\" is not a number");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t end = s.find(sep, begin);
        parts.push_back(s.substr(begin, end - begin));
        if (end == std::string::npos) return parts;
        begin = end + 1;
    }
}

Vec3 parse_vec3(const std::string& text, const std::string& what)
{
    const auto parts = split(text, ',');
    if (parts.size() != 3) config_fail(what + ": expected \"x,K,E\", got \"" + text + "\"");
    return {to_double(parts[0], what), to_double(parts[1], what), to_double(parts[2], what)};
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& what)
{
    const auto parts = split(text, ',');
    if (parts.size() != 2) config_fail(what + ": expected \"lo,hi\", got \"" + text + "\"");
    return {to_double(parts[0], what), to_double(parts[1], what)};
}

int parse_axis(const std::string& text)
{
    for (int a = 0; a < 3; ++a)
        if (text == axis_name(a) || text == std::to_string(a)) return a;
    config_fail("--axis: expected x, K or E, got \"" + text + "\"");
}

std::string format_state(const Vec3& z)
{
    return "(" + fmt_g9(z[0]) + "," + fmt_g9(z[1]) + "," + fmt_g9(z[2]) + ")";
}

std::string profile_name(const DisturbanceProfile& p)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantProfile>)
                return "constant:" + fmt_g9(v.value);
            else if constexpr (std::is_same_v<T, StepwiseProfile>) {
                std::string s = "stepwise[";
                for (std::size_t i = 0; i < v.values.size(); ++i)
                    s += (i ? " " : "") + fmt_g9(v.values[i]);
                return s + "]";
            } else if constexpr (std::is_same_v<T, PeriodicJumpsProfile>)
                return "periodic";
            else
                return "adversarial";
        },
        p);
}

// --- JSON configuration ------------------------------------------------------

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) config_fail("config: unknown key \"" + where + it.key() + "\"");
    }
}

Vec3 vec3_from_json(const json& j, const std::string& what)
{
    if (!j.is_array() || j.size() != 3)
        config_fail("config: " + what + " must be an array of three numbers");
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

DisturbanceProfile profile_from_json(const json& j)
{
    if (!j.is_object()) config_fail("config: each profile must be an object with a \"type\"");
    const std::string type = j.value("type", "");
    if (type == "constant") {
        check_keys(j, {"type", "value"}, "profile.");
        return ConstantProfile{j.value("value", 25.0)};
    }
    if (type == "stepwise") {
        check_keys(j, {"type", "edges", "values"}, "profile.");
        return StepwiseProfile::make(j.at("edges").get<std::vector<double>>(),
                                     j.at("values").get<std::vector<double>>());
    }
    if (type == "periodic") {
        check_keys(j, {"type", "amplitude", "period", "offset", "jumps"}, "profile.");
        PeriodicJumpsProfile p;
        p.amplitude = j.value("amplitude", p.amplitude);
        p.period = j.value("period", p.period);
        p.offset = j.value("offset", p.offset);
        if (j.contains("jumps"))
            for (const json& jj : j.at("jumps")) {
                check_keys(jj, {"begin", "end", "delta"}, "profile.jumps.");
                p.jumps.push_back({jj.at("begin").get<double>(), jj.at("end").get<double>(),
                                   jj.at("delta").get<double>()});
            }
        return p;
    }
    if (type == "adversarial") {
        check_keys(j, {"type"}, "profile.");
        return AdversarialProfile{};
    }
    config_fail("config: unknown profile type \"" + type +
                "\" (constant | stepwise | periodic | adversarial)");
}

void apply_params_json(WteParams& p, const json& j)
{
    check_keys(j,
               {"beta", "gamma", "mu", "alpha", "alpha_k", "q_max", "i_max", "eta_min",
                "eta_max", "horizon", "domain_lo", "domain_hi", "target"},
               "params.");
    if (j.contains("beta")) p.beta = j.at("beta").get<double>();
    if (j.contains("gamma")) p.gamma = j.at("gamma").get<double>();
    if (j.contains("mu")) p.mu = j.at("mu").get<double>();
    if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
    if (j.contains("alpha_k")) p.alpha_k = j.at("alpha_k").get<double>();
    if (j.contains("q_max")) p.q_max = j.at("q_max").get<double>();
    if (j.contains("i_max")) p.i_max = j.at("i_max").get<double>();
    if (j.contains("eta_min")) p.eta_min = j.at("eta_min").get<double>();
    if (j.contains("eta_max")) p.eta_max = j.at("eta_max").get<double>();
    if (j.contains("horizon")) p.horizon = j.at("horizon").get<double>();
    if (j.contains("domain_lo")) p.domain_lo = vec3_from_json(j.at("domain_lo"), "params.domain_lo");
    if (j.contains("domain_hi")) p.domain_hi = vec3_from_json(j.at("domain_hi"), "params.domain_hi");
    if (j.contains("target")) {
        const json& t = j.at("target");
        check_keys(t, {"x_cap", "k_cap", "e_min"}, "params.target.");
        if (t.contains("x_cap")) p.target.q_cap = t.at("x_cap").get<double>();
        if (t.contains("k_cap")) p.target.k_eff = t.at("k_cap").get<double>();
        if (t.contains("e_min")) p.target.e_min = t.at("e_min").get<double>();
    }
}

void apply_solve_json(SolveConfig& s, const json& j)
{
    check_keys(j,
               {"cfl_safety", "max_steps", "snapshot_stride", "steady_tol", "fixed_dt",
                "threads", "dissipation_band"},
               "solve.");
    if (j.contains("cfl_safety")) s.cfl_safety = j.at("cfl_safety").get<double>();
    if (j.contains("max_steps")) s.max_steps = j.at("max_steps").get<long>();
    if (j.contains("snapshot_stride")) s.snapshot_stride = j.at("snapshot_stride").get<long>();
    if (j.contains("steady_tol")) s.steady_tol = j.at("steady_tol").get<double>();
    if (j.contains("fixed_dt")) s.fixed_dt = j.at("fixed_dt").get<double>();
    if (j.contains("threads")) s.threads = j.at("threads").get<int>();
    if (j.contains("dissipation_band")) {
        const json& b = j.at("dissipation_band");
        if (b.is_null())
            s.dissipation_band.reset();
        else {
            if (!b.is_array() || b.size() != 2)
                config_fail("config: solve.dissipation_band must be [lo, hi] or null");
            s.dissipation_band = {b.at(0).get<double>(), b.at(1).get<double>()};
        }
    }
}

// --- Flag plumbing -----------------------------------------------------------

struct Overrides {
    std::string config;
    int scenario = 0;         // 0 = unset
    int grid = 0;             // uniform nodes per axis; 0 = unset
    int threads = INT_MIN;    // INT_MIN = unset; <= 0 = all cores
    std::string out;
    std::string band;
    double cfl = NAN;
    double fixed_dt = NAN;
    double steady_tol = NAN;
    long long stride = LLONG_MIN;
    long long max_steps = LLONG_MIN;
    bool quiet = false;
};

void add_common_options(CLI::App* sub, Overrides& o, bool with_solver_knobs)
{
    sub->add_option("--config", o.config, "JSON configuration file (see README for the schema)");
    sub->add_option("--scenario", o.scenario, "scenario preset: 1, 2 or 3")
        ->check(CLI::Range(1, 3));
    sub->add_option("--grid", o.grid, "uniform nodes per axis (default 51)");
    sub->add_option("--threads", o.threads, "solver threads; 0 or less uses all cores");
    sub->add_option("--out", o.out,
                    "output directory (beats the HJREACH_OUT environment variable)");
    sub->add_flag("--quiet", o.quiet, "suppress progress and warnings on stderr");
    if (with_solver_knobs) {
        sub->add_option("--cfl", o.cfl, "CFL safety factor in (0, 1]");
        sub->add_option("--fixed-dt", o.fixed_dt, "fixed time step (0 derives one from CFL)");
        sub->add_option("--steady-tol", o.steady_tol, "early-stop threshold on the step change");
        sub->add_option("--snapshot-stride", o.stride, "keep every k-th field (0 picks ~60)");
        sub->add_option("--max-steps", o.max_steps, "upper bound on march steps");
        sub->add_option("--band", o.band,
                        "dissipation band \"lo,hi\" shared between comparable solves");
    }
}

struct RunConfig {
    WteParams params;
    Index3 grid_counts{51, 51, 51};
    SolveConfig solve;
    std::optional<int> scenario;
    std::vector<DisturbanceProfile> profiles;
    std::vector<Vec3> initial_states;
    std::string out_dir = ".";
    bool quiet = false;
};

RunConfig build_config(const Overrides& o)
{
    RunConfig cfg;
    cfg.solve.threads = 0;   // resolved to the core count below unless overridden

    json j = json::object();
    if (!o.config.empty()) {
        std::ifstream is(o.config);
        if (!is) config_fail("config: cannot open " + o.config);
        try {
            j = json::parse(is);
        } catch (const json::parse_error& e) {
            config_fail("config: " + std::string(e.what()));
        }
        if (!j.is_object()) config_fail("config: top level must be a JSON object");
        check_keys(j, {"scenario", "params", "grid", "solve", "profile", "initial_states",
                       "out_dir"},
                   "");
    }

    // Preset first (inflow bounds, target, horizon, default profiles/states),
    // then file keys, then flags.
    const int scen = o.scenario != 0 ? o.scenario : j.value("scenario", 0);
    if (scen != 0) {
        const ScenarioPreset pre = scenario_preset(scen);
        cfg.scenario = scen;
        cfg.params.eta_min = pre.params.eta_min;
        cfg.params.eta_max = pre.params.eta_max;
        cfg.params.horizon = pre.params.horizon;
        cfg.params.target = pre.params.target;
        cfg.profiles = pre.profiles;
        cfg.initial_states = pre.initial_states;
    }

    if (j.contains("params")) apply_params_json(cfg.params, j.at("params"));
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, {"counts", "n"}, "grid.");
        if (g.contains("n")) {
            const int n = g.at("n").get<int>();
            cfg.grid_counts = {n, n, n};
        }
        if (g.contains("counts")) {
            if (!g.at("counts").is_array() || g.at("counts").size() != 3)
                config_fail("config: grid.counts must be an array of three integers");
            for (int a = 0; a < 3; ++a) cfg.grid_counts[a] = g.at("counts").at(a).get<int>();
        }
    }
    if (j.contains("solve")) apply_solve_json(cfg.solve, j.at("solve"));
    if (j.contains("profile")) {
        cfg.profiles.clear();
        const json& p = j.at("profile");
        if (p.is_array())
            for (const json& e : p) cfg.profiles.push_back(profile_from_json(e));
        else
            cfg.profiles.push_back(profile_from_json(p));
    }
    if (j.contains("initial_states")) {
        cfg.initial_states.clear();
        for (const json& e : j.at("initial_states"))
            cfg.initial_states.push_back(vec3_from_json(e, "initial_states entry"));
    }
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();

    if (o.grid != 0) cfg.grid_counts = {o.grid, o.grid, o.grid};
    if (o.threads != INT_MIN) cfg.solve.threads = o.threads;
    if (!std::isnan(o.cfl)) cfg.solve.cfl_safety = o.cfl;
    if (!std::isnan(o.fixed_dt)) cfg.solve.fixed_dt = o.fixed_dt;
    if (!std::isnan(o.steady_tol)) cfg.solve.steady_tol = o.steady_tol;
    if (o.stride != LLONG_MIN) cfg.solve.snapshot_stride = static_cast<long>(o.stride);
    if (o.max_steps != LLONG_MIN) cfg.solve.max_steps = static_cast<long>(o.max_steps);
    if (!o.band.empty()) cfg.solve.dissipation_band = parse_pair(o.band, "--band");

    // Output directory precedence: --out flag, HJREACH_OUT, config file, ".".
    if (const char* env = std::getenv("HJREACH_OUT");
        env != nullptr && *env != '\0' && o.out.empty())
        cfg.out_dir = env;
    if (!o.out.empty()) cfg.out_dir = o.out;
    cfg.quiet = o.quiet;

    if (cfg.solve.threads <= 0)
        cfg.solve.threads = std::max(1u, std::thread::hardware_concurrency());
    cfg.params.validate();
    return cfg;
}

ProgressFn make_progress(bool quiet)
{
    if (quiet) return {};
    return [](long done, long total, double label, double change) {
        std::fprintf(stderr, "\r[solve] step %ld/%ld  t=%.4f  delta=%.3e", done, total, label,
                     change);
        if (done >= total) std::fputc('\n', stderr);
        std::fflush(stderr);
    };
}

void warn_if_large(const GridSpec& g, bool quiet)
{
    const int n = std::max({g.counts[0], g.counts[1], g.counts[2]});
    if (!quiet && n >= 101)
        std::fprintf(stderr,
                     "[warn] %dx%dx%d grid: a full march at this scale can take on the order "
                     "of an hour\n",
                     g.counts[0], g.counts[1], g.counts[2]);
}

// --- Subcommands -------------------------------------------------------------

int run_solve(const Overrides& o, bool write_snapshots)
{
    const RunConfig cfg = build_config(o);
    const GridSpec grid =
        GridSpec::make(cfg.params.domain_lo, cfg.params.domain_hi, cfg.grid_counts);
    warn_if_large(grid, cfg.quiet);
    fs::create_directories(cfg.out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult res = solve(cfg.params, grid, cfg.solve, make_progress(cfg.quiet));
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string field_path = (fs::path(cfg.out_dir) / "value.hjvf").string();
    save_field(res.final_field, field_path);
    if (write_snapshots) {
        const fs::path dir = fs::path(cfg.out_dir) / "snapshots";
        fs::create_directories(dir);
        char name[32];
        for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
            std::snprintf(name, sizeof name, "snap_%04zu.hjvf", i);
            save_field(res.snapshots[i], (dir / name).string());
        }
    }

    const std::vector<double>& v = res.final_field.values;
    const double vmin = *std::min_element(v.begin(), v.end());
    const std::size_t inside =
        static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x <= 0.0; }));

    std::string summary;
    summary += "scenario: " + (cfg.scenario ? std::to_string(*cfg.scenario) : std::string("none")) + "\n";
    summary += "grid: " + std::to_string(grid.counts[0]) + "x" + std::to_string(grid.counts[1]) +
               "x" + std::to_string(grid.counts[2]) + "\n";
    summary += "threads: " + std::to_string(cfg.solve.threads) + "\n";
    summary += "dt: " + fmt_g9(res.dt_used) + "\n";
    summary += "steps: " + std::to_string(res.steps_taken) + "\n";
    summary += "snapshots: " + std::to_string(res.snapshots.size()) + "\n";
    summary += "runtime_s: " + fmt_g9(runtime) + "\n";
    summary += "value_min: " + fmt_g9(vmin) + "\n";
    summary += "brs_volume: " + fmt_g9(brs_volume(res.final_field)) + "\n";
    summary += "brs_node_fraction: " +
               fmt_g9(static_cast<double>(inside) / static_cast<double>(v.size())) + "\n";
    summary += "field_file: " + field_path + "\n";

    std::fputs(summary.c_str(), stdout);
    std::ofstream(fs::path(cfg.out_dir) / "summary.txt") << summary;
    return 0;
}

int run_slice(const std::string& field_path, const std::string& axis_text, double level,
              const std::string& out_file)
{
    const ScalarField f = load_field(field_path);
    const BrsSlice s = extract_slice(f, parse_axis(axis_text), level);
    export_csv(s, out_file);
    std::size_t members = 0;
    for (unsigned char m : s.mask) members += m;
    std::printf("wrote %s (%d x %d nodes, %zu in the set)\n", out_file.c_str(), s.counts[0],
                s.counts[1], members);
    return 0;
}

int run_query(const std::string& field_path, const std::string& state_text)
{
    const ScalarField f = load_field(field_path);
    const Vec3 z = parse_vec3(state_text, "--state");
    const double v = trilinear(f, z);
    std::printf("state: %s\ntime_label: %s\nvalue: %s\nmember: %s\n",
                format_state(z).c_str(), fmt_g9(f.time_label).c_str(), fmt_g9(v).c_str(),
                v <= 0.0 ? "yes" : "no");
    return 0;
}

int run_volume(const std::string& field_path)
{
    const ScalarField f = load_field(field_path);
    const std::vector<double>& v = f.values;
    const std::size_t inside =
        static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x <= 0.0; }));
    std::printf("nodes: %zu\nbrs_nodes: %zu\nbrs_node_fraction: %s\nbrs_volume: %s\n"
                "domain_volume: %s\n",
                v.size(), inside,
                fmt_g9(static_cast<double>(inside) / static_cast<double>(v.size())).c_str(),
                fmt_g9(brs_volume(f)).c_str(), fmt_g9(f.spec.domain_volume()).c_str());
    return 0;
}

int run_compare(const std::string& path_a, const std::string& path_b, double tol,
                const std::string& out_file)
{
    const ScalarField a = load_field(path_a);
    const ScalarField b = load_field(path_b);
    const FieldComparison cmp = compare_fields(a, b, tol);
    if (!out_file.empty()) export_csv(cmp, out_file);
    std::printf("nodes: %zu\ndominance_fraction: %s\nvolume_a: %s\nvolume_b: %s\n"
                "volume_ratio: %s\n",
                cmp.nodes, fmt_g9(cmp.dominance_fraction).c_str(), fmt_g9(cmp.volume_a).c_str(),
                fmt_g9(cmp.volume_b).c_str(), fmt_g9(cmp.volume_ratio).c_str());
    return 0;
}

struct SimFlags {
    std::vector<std::string> states;
    std::vector<std::string> profiles;
    double dt_sim = 0.0;
    std::string run_dir;
};

DisturbanceProfile parse_profile_flag(const std::string& s)
{
    if (s == "adversarial") return AdversarialProfile{};
    if (s == "seasonal") return seasonal_profile();
    if (s.rfind("constant:", 0) == 0) return ConstantProfile{to_double(s.substr(9), "--profile")};
    if (s.rfind("stepwise:", 0) == 0) {
        const int idx = static_cast<int>(to_double(s.substr(9), "--profile"));
        const auto all = stepwise_profiles();
        if (idx < 0 || idx >= static_cast<int>(all.size()))
            config_fail("--profile: stepwise index must be 0, 1 or 2");
        return all[static_cast<std::size_t>(idx)];
    }
    config_fail("--profile: unknown spec \"" + s +
                "\" (constant:V | stepwise:0..2 | seasonal | adversarial)");
}

std::vector<ScalarField> obtain_snapshots(const RunConfig& cfg, const SimFlags& sf)
{
    if (!sf.run_dir.empty()) {
        const fs::path dir = fs::path(sf.run_dir) / "snapshots";
        std::vector<std::string> files;
        if (fs::is_directory(dir))
            for (const auto& e : fs::directory_iterator(dir))
                if (e.path().extension() == ".hjvf") files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
        std::vector<ScalarField> snaps;
        for (const std::string& f : files) snaps.push_back(load_field(f));
        if (snaps.empty()) {
            const fs::path single = fs::path(sf.run_dir) / "value.hjvf";
            if (!fs::exists(single))
                config_fail("--run: no snapshots/ or value.hjvf under " + sf.run_dir +
                            " (produce one with: solve --snapshots)");
            std::fprintf(stderr,
                         "[warn] %s has no snapshot ladder; feedback will use the final field "
                         "only\n",
                         sf.run_dir.c_str());
            snaps.push_back(load_field(single.string()));
        }
        return snaps;
    }
    const GridSpec grid =
        GridSpec::make(cfg.params.domain_lo, cfg.params.domain_hi, cfg.grid_counts);
    warn_if_large(grid, cfg.quiet);
    return solve(cfg.params, grid, cfg.solve, make_progress(cfg.quiet)).snapshots;
}

int run_simulate(const Overrides& o, const SimFlags& sf, bool write_csv)
{
    const RunConfig cfg = build_config(o);

    std::vector<Vec3> states;
    for (const std::string& s : sf.states) states.push_back(parse_vec3(s, "--state"));
    if (states.empty()) states = cfg.initial_states;
    if (states.empty())
        config_fail("no initial states: pass --state x,K,E or pick a scenario preset");

    std::vector<DisturbanceProfile> profiles;
    for (const std::string& s : sf.profiles) profiles.push_back(parse_profile_flag(s));
    if (profiles.empty()) profiles = cfg.profiles;
    if (profiles.empty())
        profiles.push_back(ConstantProfile{0.5 * (cfg.params.eta_min + cfg.params.eta_max)});

    const std::vector<ScalarField> snapshots = obtain_snapshots(cfg, sf);
    if (write_csv) fs::create_directories(cfg.out_dir);

    std::printf("%-18s %-26s %-12s %-9s %s\n", "state", "profile", "entry_time", "feasible",
                write_csv ? "file" : "");
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t p = 0; p < profiles.size(); ++p) {
            const Trajectory tr =
                simulate(cfg.params, snapshots, states[i], profiles[p], sf.dt_sim);
            std::string file;
            if (write_csv) {
                file = (fs::path(cfg.out_dir) /
                        ("traj_s" + std::to_string(i) + "_p" + std::to_string(p) + ".csv"))
                           .string();
                export_csv(tr, file);
            }
            const std::string entry = tr.entry_time ? fmt_g9(*tr.entry_time) : std::string("-");
            std::printf("%-18s %-26s %-12s %-9s %s\n", format_state(states[i]).c_str(),
                        profile_name(profiles[p]).c_str(), entry.c_str(),
                        tr.feasible ? "yes" : "no", file.c_str());
        }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Worst-case reach-avoid analysis for the waste-to-energy control system"};
    app.require_subcommand(1);

    Overrides o;
    SimFlags sf;
    bool solve_snapshots = false;
    std::string field_path, field_path_b, axis_text = "E", state_text, out_file;
    double level = 0.0, tol = 0.0;

    CLI::App* c_solve = app.add_subcommand("solve", "march the value function to time 0");
    add_common_options(c_solve, o, true);
    c_solve->add_flag("--snapshots", solve_snapshots,
                      "also write the snapshot ladder under <out>/snapshots/");

    CLI::App* c_slice = app.add_subcommand("slice", "cut a 2-D CSV slice from a field file");
    c_slice->add_option("--field", field_path, "HJVF field file")->required();
    c_slice->add_option("--axis", axis_text, "fixed axis: x, K or E (default E)");
    c_slice->add_option("--level", level, "coordinate on the fixed axis")->required();
    c_slice->add_option("--out", out_file, "output CSV (default slice.csv)");

    CLI::App* c_query = app.add_subcommand("query", "interpolate a field at one state");
    c_query->add_option("--field", field_path, "HJVF field file")->required();
    c_query->add_option("--state", state_text, "state \"x,K,E\"")->required();

    CLI::App* c_volume = app.add_subcommand("volume", "sublevel-set volume of a field file");
    c_volume->add_option("--field", field_path, "HJVF field file")->required();

    CLI::App* c_compare = app.add_subcommand("compare", "compare two fields node-wise");
    c_compare->add_option("--field-a", field_path, "first HJVF field file")->required();
    c_compare->add_option("--field-b", field_path_b, "second HJVF field file")->required();
    c_compare->add_option("--tol", tol, "dominance slack (default 0)");
    c_compare->add_option("--out", out_file, "also write a report CSV here");

    CLI::App* c_sim = app.add_subcommand("simulate", "closed-loop rollouts with CSV output");
    add_common_options(c_sim, o, true);
    c_sim->add_option("--state", sf.states, "initial state \"x,K,E\" (repeatable)");
    c_sim->add_option("--profile", sf.profiles,
                      "inflow: constant:V | stepwise:0..2 | seasonal | adversarial (repeatable)");
    c_sim->add_option("--dt-sim", sf.dt_sim, "integrator step (default horizon/3000)");
    c_sim->add_option("--run", sf.run_dir,
                      "reuse a solve output directory instead of solving again");

    CLI::App* c_entry = app.add_subcommand("entry-times", "target entry times per initial state");
    add_common_options(c_entry, o, true);
    c_entry->add_option("--state", sf.states, "initial state \"x,K,E\" (repeatable)");
    c_entry->add_option("--profile", sf.profiles,
                        "inflow: constant:V | stepwise:0..2 | seasonal | adversarial (repeatable)");
    c_entry->add_option("--dt-sim", sf.dt_sim, "integrator step (default horizon/3000)");
    c_entry->add_option("--run", sf.run_dir,
                        "reuse a solve output directory instead of solving again");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_solve)) return run_solve(o, solve_snapshots);
        if (app.got_subcommand(c_slice))
            return run_slice(field_path, axis_text, level,
                             out_file.empty() ? "slice.csv" : out_file);
        if (app.got_subcommand(c_query)) return run_query(field_path, state_text);
        if (app.got_subcommand(c_volume)) return run_volume(field_path);
        if (app.got_subcommand(c_compare)) return run_compare(field_path, field_path_b, tol, out_file);
        if (app.got_subcommand(c_sim)) return run_simulate(o, sf, true);
        if (app.got_subcommand(c_entry)) return run_simulate(o, sf, false);
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
