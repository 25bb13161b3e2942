// npb: command-line front end.
//
//   npb run          --config run.cfg --out dir
//   npb decay-study  --config run.cfg --out dir
//   npb eta-study    --config run.cfg --out dir
//   npb selftest     [--seed s]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical abort,
// 4 selftest failure.

#include "npb/config.hpp"
#include "npb/errors.hpp"
#include "npb/io.hpp"
#include "npb/selftest.hpp"
#include "npb/studies.hpp"
#include "npb/timestepper.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_selftest = 4;

struct Options {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<int> resolution;
    std::optional<double> t_end;
};

void add_common(CLI::App* cmd, Options& o)
{
    cmd->add_option("--config", o.config, "configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory (created if missing)");
    cmd->add_option("--seed", o.seed, "override ic.seed");
    cmd->add_option("--mode", o.mode, "override time.mode")->check(CLI::IsMember({"imex", "imex_rk2", "picard"}));
    cmd->add_option("--resolution", o.resolution, "override grid.n");
    cmd->add_option("--t-end", o.t_end, "override time.t_end");
}

npb::RunConfig load(const Options& o)
{
    auto cfg = npb::parse_config(o.config);
    if (o.seed) cfg.ic.seed = *o.seed;
    if (o.mode) cfg.time.mode = *o.mode == "picard" ? npb::Scheme::Picard : npb::Scheme::ImexRk2;
    if (o.resolution) cfg.n = *o.resolution;
    if (o.t_end) cfg.t_end = *o.t_end;
    npb::validate_config(cfg);
    return cfg;
}

fs::path prepare_out(const Options& o)
{
    const fs::path dir(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw npb::IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_json(const fs::path& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    if (!out || !(out << j.dump(2) << '\n')) throw npb::IoError("cannot write " + path.string());
}

int report_abort(const npb::Trajectory& tr)
{
    std::cerr << "npb: numerical abort after " << tr.steps << " steps at t=" << tr.final_state.time << ": "
              << tr.abort_reason << '\n';
    return exit_numerical;
}

int cmd_run(const Options& o)
{
    const auto cfg = load(o);
    const npb::Grid g(cfg.n);
    const auto s0 = npb::make_initial_state(cfg.ic, cfg.physics, g);
    const auto dir = prepare_out(o);

    npb::StepObserver observer;
    if (cfg.output.snapshots && cfg.output.snapshot_every > 0) {
        observer = [&](const npb::SimState& s, std::size_t step) {
            if (step % cfg.output.snapshot_every == 0) {
                npb::write_snapshot(s, cfg.n, dir / ("snapshot_" + std::to_string(step) + ".bin"));
            }
        };
    }
    const auto tr = npb::run_trajectory(cfg, g, s0, observer);
    npb::write_timeseries(tr.records, cfg.physics.species(), dir / "timeseries.csv");
    if (cfg.output.snapshots) {
        npb::write_snapshot(tr.final_state, cfg.n, dir / "snapshot_final.bin");
    }
    if (tr.aborted) return report_abort(tr);
    std::cout << "run: " << tr.steps << " steps to t=" << tr.final_state.time << ", " << tr.records.size()
              << " records written to " << (dir / "timeseries.csv").string() << '\n';
    return 0;
}

int cmd_decay(const Options& o)
{
    const auto cfg = load(o);
    const npb::Grid g(cfg.n);
    const auto s0 = npb::make_initial_state(cfg.ic, cfg.physics, g);
    const auto dir = prepare_out(o);
    const auto ref = npb::ReferenceValues::from_state(s0, cfg.physics);

    const auto tr = npb::run_trajectory(cfg, g, s0);
    npb::write_timeseries(tr.records, cfg.physics.species(), dir / "timeseries.csv");
    const auto rep = npb::decay_report(tr.records, cfg, ref.concentration_means);
    auto j = rep.to_json();
    j["aborted"] = tr.aborted;
    write_json(dir / "decay_report.json", j);
    if (tr.aborted) return report_abort(tr);

    std::cout << "decay-study: smallness threshold " << j["smallness"]["threshold"].dump() << ", gate "
              << (rep.smallness.pass ? "passed" : "EXCEEDED") << '\n';
    for (const auto& f : rep.fits) {
        if (f.ok) {
            std::cout << "  " << f.name << ": rate " << f.fit.rate << ", r^2 " << f.fit.r_squared << '\n';
        } else {
            std::cout << "  " << f.name << ": no fit (" << f.error << ")\n";
        }
    }
    return 0;
}

int cmd_eta(const Options& o)
{
    const auto cfg = load(o);
    const npb::Grid g(cfg.n);
    const auto s0 = npb::make_initial_state(cfg.ic, cfg.physics, g);
    const auto dir = prepare_out(o);
    try {
        const auto rep = npb::eta_study(cfg, g, s0);
        write_json(dir / "eta_report.json", rep.to_json());
        std::cout << "eta-study: differences";
        for (double d : rep.differences) std::cout << ' ' << d;
        std::cout << (rep.strictly_decreasing ? " (strictly decreasing)" : " (NOT strictly decreasing)") << '\n';
    } catch (const npb::RunAborted& e) {
        std::cerr << "npb: numerical abort in eta ladder: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}

int cmd_selftest(std::uint64_t seed)
{
    const auto results = npb::run_selftest(seed);
    bool ok = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
        ok = ok && r.passed;
    }
    return ok ? 0 : exit_selftest;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Periodic pseudo-spectral Nernst-Planck-Boussinesq simulator"};
    app.footer("\n" + npb::config_reference());
    app.require_subcommand(1);

    Options run_opts, decay_opts, eta_opts;
    std::uint64_t selftest_seed = 1;
    auto* run = app.add_subcommand("run", "integrate one trajectory and write its diagnostics time series");
    add_common(run, run_opts);
    auto* decay = app.add_subcommand("decay-study", "run, fit exponential decay rates, check the smallness gate");
    add_common(decay, decay_opts);
    auto* eta = app.add_subcommand("eta-study", "compare trajectories along the eta ladder");
    add_common(eta, eta_opts);
    auto* self = app.add_subcommand("selftest", "built-in property suites at n=16");
    self->add_option("--seed", selftest_seed, "seed for randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*run) return cmd_run(run_opts);
        if (*decay) return cmd_decay(decay_opts);
        if (*eta) return cmd_eta(eta_opts);
        if (*self) return cmd_selftest(selftest_seed);
    } catch (const npb::ConfigError& e) {
        std::cerr << "npb: config error: " << e.what() << '\n';
        return exit_config;
    } catch (const npb::InvalidIC& e) {
        std::cerr << "npb: invalid initial condition: " << e.what() << '\n';
        return exit_config;
    } catch (const npb::Error& e) {
        std::cerr << "npb: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
