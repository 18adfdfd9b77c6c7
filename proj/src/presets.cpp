#include "chemofront/presets.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "chemofront/output.hpp"
#include "chemofront/plot.hpp"

namespace chemofront {

namespace {

ModelParams make(double h0, double sigma, double chi1, double chi2, double nu, double lambda1,
                 double lambda2, double mu1, double mu2)
{
    ModelParams p;
    p.a = 2.0;
    p.b = 1.0;
    p.h0 = h0;
    p.sigma = sigma;
    p.chi1 = chi1;
    p.chi2 = chi2;
    p.nu = nu;
    p.lambda1 = lambda1;
    p.lambda2 = lambda2;
    p.mu1 = mu1;
    p.mu2 = mu2;
    return p;
}

Preset single(std::string id, std::string title, ModelParams p)
{
    Preset s;
    s.id = std::move(id);
    s.title = std::move(title);
    s.params = p;
    s.snapshot_times = {0.0, 0.25 * s.horizon, 0.5 * s.horizon, s.horizon};
    return s;
}

Preset table(std::string id, std::string title, ModelParams p, std::string axis, std::vector<double> values)
{
    Preset s;
    s.id = std::move(id);
    s.title = std::move(title);
    s.kind = PresetKind::Table;
    s.params = p;
    s.cells = 200;
    s.horizon = 10.0;
    s.axis = std::move(axis);
    s.values = std::move(values);
    s.report_times = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    return s;
}

std::vector<Preset> build_presets()
{
    const std::vector<double> sigmas{0.01, 0.1, 1, 2, 4};
    const std::vector<double> habitats{1, 1.2, 1.5, 2, 3, 5};
    const ModelParams chemo = make(2, 1, 0.2, 0.1, 0.8, 1, 2, 1, 2);
    const ModelParams fisher = make(2, 1, 0, 0, 0.8, 1, 2, 1, 2);

    std::vector<Preset> list;
    list.push_back(single("ex3_1", "small chemotaxis, h0 above l*", make(2.5, 1, 0.02, 0.01, 0.01, 2, 1, 2, 1)));
    list.push_back(single("ex3_2", "strong chemotaxis, h0 below l*", make(0.5, 1, 2, 1, 0.8, 1, 2, 1, 2)));
    list.push_back(single("ex3_3", "strong chemotaxis, h0 above l*", make(2.5, 1, 2, 1, 0.8, 1, 2, 1, 2)));
    list.push_back(single("ex3_4", "h0 below l*, large nu", make(1, 1, 0.2, 0.1, 2, 1, 2, 1, 2)));
    list.push_back(single("ex3_5", "h0 below l*, small nu", make(1, 1, 0.2, 0.1, 0.01, 1, 2, 1, 2)));

    Preset nu_star;
    nu_star.id = "ex3_6";
    nu_star.title = "critical nu by bisection";
    nu_star.kind = PresetKind::Bisection;
    nu_star.params = make(1, 1, 0.2, 0.1, 0.8, 1, 2, 1, 2);
    nu_star.horizon = 30.0;
    nu_star.lower = 0.01;
    nu_star.upper = 0.1;
    list.push_back(nu_star);

    list.push_back(single("ex3_7", "large initial density", make(1, 4, 0.2, 0.1, 0.8, 1, 2, 1, 2)));
    list.push_back(single("ex3_8", "small initial density", make(1, 0.01, 0.2, 0.1, 0.8, 1, 2, 1, 2)));
    list.push_back(single("ex3_9", "h0 = 2, large nu", make(2, 1, 0.2, 0.1, 2, 1, 2, 1, 2)));
    list.push_back(single("ex3_10", "h0 = 2, small nu", make(2, 1, 0.2, 0.1, 0.01, 1, 2, 1, 2)));

    list.push_back(table("table3_11", "spreading speed against sigma", chemo, "sigma", sigmas));
    list.push_back(table("table3_12", "spreading speed against sigma, no chemotaxis", fisher, "sigma", sigmas));
    list.push_back(table("table3_13", "spreading speed against h0", chemo, "h0", habitats));
    list.push_back(table("table3_14", "spreading speed against h0, no chemotaxis", fisher, "h0", habitats));
    const std::size_t first_table = list.size() - 4;
    for (std::size_t k = 0; k < 4; ++k) {
        Preset alias = list[first_table + k];
        alias.id = "ex3_" + std::to_string(11 + k);
        list.push_back(alias);
    }

    list.push_back(single("ex3_15", "large chemotaxis, lambda1 > lambda2", make(2.5, 1, 0.2, 0.1, 0.8, 2, 1, 2, 1)));
    list.push_back(single("ex3_16", "lambda1 > lambda2, mu1 < mu2", make(2.5, 1, 0.2, 0.1, 0.8, 2, 1, 1, 2)));
    list.push_back(single("ex3_16b", "lambda1 < lambda2, mu1 > mu2", make(2.5, 1, 0.2, 0.1, 0.8, 1, 2, 2, 1)));
    return list;
}

std::string time_tag(double t)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t, std::chars_format::fixed, 3);
    return std::string(buf, ptr);
}

Series column(const std::string& label, const std::vector<TrajectorySample>& samples,
              double TrajectorySample::*field)
{
    Series s;
    s.label = label;
    for (const auto& sample : samples) {
        s.x.push_back(sample.t);
        s.y.push_back(sample.*field);
    }
    return s;
}

}  // namespace

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> list = build_presets();
    return list;
}

const Preset& find_preset(const std::string& id)
{
    for (const auto& p : presets())
        if (p.id == id)
            return p;
    std::string ids;
    for (const auto& p : presets())
        ids += (ids.empty() ? "" : ", ") + p.id;
    throw UnknownPreset("unknown preset '" + id + "' (known: " + ids + ")");
}

std::vector<std::filesystem::path> write_run_artifacts(const Trajectory& traj, const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files;
    files.push_back(dir / "timeseries.csv");
    write_timeseries(traj, files.back());
    for (const auto& snap : traj.snapshots) {
        files.push_back(dir / ("snapshot_t" + time_tag(snap.t) + ".csv"));
        auto out = open_output(files.back());
        write_snapshot(snap, out);
        if (!out.flush())
            throw OutputError("write failed for " + files.back().string());
    }
    if (traj.samples.empty())
        return files;

    files.push_back(dir / "front.svg");
    emit_plot({"front position", "t", "h(t)", {column("h", traj.samples, &TrajectorySample::h)}}, files.back());

    std::vector<TrajectorySample> later;
    for (const auto& s : traj.samples)
        if (s.t > 0.0)
            later.push_back(s);
    if (!later.empty()) {
        files.push_back(dir / "speed.svg");
        emit_plot({"spreading speed",
                   "t",
                   "speed",
                   {column("h/t", later, &TrajectorySample::h_over_t),
                    column("dh/dt", later, &TrajectorySample::dh_dt)}},
                  files.back());
    }

    files.push_back(dir / "density.svg");
    emit_plot({"density",
               "t",
               "w",
               {column("max w", traj.samples, &TrajectorySample::sup_w),
                column("w at x = 0", traj.samples, &TrajectorySample::w_at_0)}},
              files.back());

    if (!traj.snapshots.empty()) {
        PlotSpec profile{"density profiles", "x", "u", {}};
        for (const auto& snap : traj.snapshots)
            profile.series.push_back({"t = " + time_tag(snap.t), snap.x, snap.w});
        files.push_back(dir / "profile.svg");
        emit_plot(profile, files.back());
    }
    return files;
}

std::vector<std::filesystem::path> write_table_artifacts(const SpeedTable& table, const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files;
    files.push_back(dir / "speed_table.csv");
    write_speed_table(table, files.back());

    PlotSpec spec{"spreading speed", "T", "dh/dt", {}};
    for (std::size_t c = 0; c < table.values.size(); ++c) {
        Series s;
        s.label = table.axis + " = " + format_number(table.values[c]);
        for (std::size_t r = 0; r < table.report_times.size(); ++r)
            if (const auto& cell = table.cells[r][c]) {
                s.x.push_back(table.report_times[r]);
                s.y.push_back(*cell);
            }
        spec.series.push_back(std::move(s));
    }
    try {
        emit_plot(spec, dir / "speeds.svg");
        files.push_back(dir / "speeds.svg");
    } catch (const std::invalid_argument&) {
        // every column failed; the CSV already records that
    }
    return files;
}

std::vector<std::filesystem::path> write_bisection_artifacts(const BisectionResult& result,
                                                             const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files{dir / "bisection.csv"};
    auto out = open_output(files.back());
    out << to_string(result.parameter) << ",outcome,horizon_extended\n";
    for (const auto& st : result.history)
        out << format_number(st.value) << ',' << to_string(st.kind) << ',' << (st.horizon_extended ? 1 : 0) << '\n';
    if (!out.flush())
        throw OutputError("write failed for " + files.back().string());
    return files;
}

std::vector<std::filesystem::path> write_convergence_artifacts(const ConvergenceReport& report,
                                                               const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files{dir / "convergence.csv"};
    auto out = open_output(files.back());
    out << "cells,tau,steps,final_h,difference,front_difference,order\n";
    for (std::size_t k = 0; k < report.levels.size(); ++k) {
        const auto& l = report.levels[k];
        out << l.cells << ',' << format_number(l.tau) << ',' << l.steps << ',' << format_number(l.final_h) << ',';
        if (k < report.differences.size())
            out << format_number(report.differences[k]) << ',' << format_number(report.front_differences[k]);
        else
            out << ',';
        out << ',';
        if (k < report.orders.size())
            out << format_number(report.orders[k]);
        out << '\n';
    }
    if (!out.flush())
        throw OutputError("write failed for " + files.back().string());
    return files;
}

std::string describe(const Outcome& outcome)
{
    return std::string(to_string(outcome.kind)) + ": " + outcome.evidence;
}

std::string describe(const SpeedTable& table)
{
    std::ostringstream out;
    out << "T";
    for (double v : table.values)
        out << "\t" << table.axis << "=" << format_number(v);
    out << "\n";
    for (std::size_t r = 0; r < table.report_times.size(); ++r) {
        out << format_number(table.report_times[r]);
        for (const auto& cell : table.cells[r]) {
            out << "\t";
            if (cell) {
                char buf[32];
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *cell, std::chars_format::fixed, 4);
                out << std::string(buf, ptr);
            } else {
                out << "-";
            }
        }
        out << "\n";
    }
    for (std::size_t c = 0; c < table.errors.size(); ++c)
        if (!table.errors[c].empty())
            out << table.axis << "=" << format_number(table.values[c]) << " failed: " << table.errors[c] << "\n";
    return out.str();
}

std::string describe(const BisectionResult& result)
{
    std::ostringstream out;
    out << to_string(result.parameter) << " in (" << format_number(result.lower) << ", "
        << format_number(result.upper) << ") after " << result.simulations << " simulations\n";
    return out.str();
}

std::string describe(const ConvergenceReport& report)
{
    std::ostringstream out;
    for (std::size_t k = 0; k < report.differences.size(); ++k) {
        out << "M=" << report.levels[k].cells << " vs " << report.levels[k + 1].cells
            << ": max |dw| = " << format_number(report.differences[k]);
        if (k >= 1 && k - 1 < report.orders.size())
            out << ", order " << format_number(report.orders[k - 1]);
        out << "\n";
    }
    return out.str();
}

PresetResult run_preset(const std::string& id, const std::filesystem::path& root)
{
    const Preset& preset = find_preset(id);
    const auto dir = root / preset.id;
    PresetResult result;

    TrialSetup setup;
    setup.cells = preset.cells;
    setup.horizon = preset.horizon;
    setup.policy = StepPolicy::DiffusionLimited;
    setup.run.allow_unstable_step = true;
    setup.run.sample_every = preset.sample_every;

    switch (preset.kind) {
    case PresetKind::Single: {
        setup.run.snapshot_times = preset.snapshot_times;
        const double tau = choose_timestep(preset.params, preset.cells, preset.horizon, setup.policy);
        Trajectory traj = run(preset.params, build_grid(preset.cells, tau, preset.horizon), setup.run);
        result.files = write_run_artifacts(traj, dir);
        result.summary = describe(classify(traj));
        result.trajectory = std::move(traj);
        break;
    }
    case PresetKind::Table: {
        SpeedTable t = sweep(preset.params, preset.axis, preset.values, preset.report_times, setup);
        result.files = write_table_artifacts(t, dir);
        result.summary = describe(t);
        result.table = std::move(t);
        break;
    }
    case PresetKind::Bisection: {
        BisectionResult b = bisect_critical(BisectParameter::Nu, preset.lower, preset.upper, preset.tolerance,
                                            preset.params, setup);
        result.files = write_bisection_artifacts(b, dir);
        result.summary = describe(b);
        result.bisection = std::move(b);
        break;
    }
    }
    return result;
}

}  // namespace chemofront
