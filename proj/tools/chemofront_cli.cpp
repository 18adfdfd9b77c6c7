#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chemofront/config.hpp"
#include "chemofront/convergence.hpp"
#include "chemofront/output.hpp"
#include "chemofront/presets.hpp"

namespace fs = std::filesystem;
using namespace chemofront;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_abort = 2;

fs::path output_root()
{
    const char* env = std::getenv("CHEMOFRONT_OUTPUT");
    return env && *env ? fs::path(env) : fs::path("output");
}

fs::path output_dir(const RunConfig& c)
{
    const fs::path dir(c.output_dir);
    if (dir.is_absolute())
        return dir;
    const char* env = std::getenv("CHEMOFRONT_OUTPUT");
    return env && *env ? fs::path(env) / dir : dir;
}

void list_files(const std::vector<fs::path>& files)
{
    for (const auto& f : files)
        std::cout << "wrote " << f.string() << "\n";
}

RunConfig load_for(const std::string& path, RunMode mode)
{
    RunConfig c = load_config(path, mode);
    if (c.mode != mode)
        throw ConfigValidationError("mode", std::string("config declares ") + to_string(c.mode) +
                                                " but the command is " + to_string(mode));
    return c;
}

void print_diagnostics(const Trajectory& traj)
{
    const auto& d = traj.diagnostics;
    std::cout << "steps " << d.steps << ", tau " << format_number(traj.grid.tau()) << ", stable bound "
              << format_number(d.stable_step) << (d.step_exceeds_bound ? " (exceeded)" : "") << "\n";
    std::cout << "min w " << format_number(d.min_w_seen) << ", front monotone " << (d.front_monotone ? "yes" : "no")
              << ", negative-coefficient steps " << d.negative_coefficient_steps << ", max-principle failures "
              << d.max_principle_failures << "\n";
}

int simulate(const std::string& path)
{
    const RunConfig c = load_for(path, RunMode::Simulate);
    const Trajectory traj = run(c.params, c.grid(), c.run_options());
    const fs::path dir = output_dir(c);
    write_text(dir / "config.txt", render_config(c));
    list_files(write_run_artifacts(traj, dir));
    print_diagnostics(traj);
    std::cout << describe(classify(traj)) << "\n";
    return exit_ok;
}

int sweep_cmd(const std::string& path)
{
    const RunConfig c = load_for(path, RunMode::Sweep);
    const SpeedTable t = sweep(c.params, c.axis, c.values, c.report_times, c.trial_setup(), c.speed_window);
    const fs::path dir = output_dir(c);
    write_text(dir / "config.txt", render_config(c));
    list_files(write_table_artifacts(t, dir));
    std::cout << describe(t);
    for (const auto& e : t.errors)
        if (!e.empty())
            return exit_abort;
    return exit_ok;
}

int bisect_cmd(const std::string& path)
{
    const RunConfig c = load_for(path, RunMode::Bisect);
    const BisectionResult r =
        bisect_critical(c.parameter, *c.lower, *c.upper, c.tolerance, c.params, c.trial_setup(), c.max_iterations);
    const fs::path dir = output_dir(c);
    write_text(dir / "config.txt", render_config(c));
    list_files(write_bisection_artifacts(r, dir));
    std::cout << describe(r);
    return exit_ok;
}

int convergence_cmd(const std::string& path)
{
    const RunConfig c = load_for(path, RunMode::Convergence);
    const ConvergenceReport r = convergence_study(c, c.refinements);
    const fs::path dir = output_dir(c);
    write_text(dir / "config.txt", render_config(c));
    list_files(write_convergence_artifacts(r, dir));
    std::cout << describe(r);
    return exit_ok;
}

int preset_cmd(const std::string& id)
{
    const PresetResult r = run_preset(id, output_root());
    list_files(r.files);
    std::cout << r.summary;
    if (!r.summary.empty() && r.summary.back() != '\n')
        std::cout << "\n";
    if (r.table)
        for (const auto& e : r.table->errors)
            if (!e.empty())
                return exit_abort;
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Free-boundary chemotaxis solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_id;
    bool list = false;

    auto* sim = app.add_subcommand("simulate", "Single run; writes time series, snapshots and plots");
    sim->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    auto* sw = app.add_subcommand("sweep", "Speed table over one parameter");
    sw->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    auto* bi = app.add_subcommand("bisect", "Bisection for the critical nu or sigma");
    bi->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    auto* cv = app.add_subcommand("convergence", "Self-refinement study");
    cv->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    auto* pr = app.add_subcommand("preset", "Run a built-in experiment (output root from CHEMOFRONT_OUTPUT)");
    pr->add_option("id", preset_id, "Preset id");
    pr->add_flag("--list", list, "List preset ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (*sim)
            return simulate(config_path);
        if (*sw)
            return sweep_cmd(config_path);
        if (*bi)
            return bisect_cmd(config_path);
        if (*cv)
            return convergence_cmd(config_path);
        if (list) {
            for (const auto& p : presets())
                std::cout << p.id << "\t" << p.title << "\n";
            return exit_ok;
        }
        if (preset_id.empty()) {
            std::cerr << "error: preset id required (see --list)\n";
            return exit_invalid;
        }
        return preset_cmd(preset_id);
    } catch (const NumericalAbort& e) {
        std::cerr << "numerical abort at step " << e.step() << ": " << e.what() << "\n";
        return exit_abort;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
}
