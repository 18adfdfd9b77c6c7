// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chemofront/convergence.hpp"
#include "chemofront/elliptic.hpp"
#include "chemofront/output.hpp"
#include "chemofront/presets.hpp"

using namespace chemofront;
namespace fs = std::filesystem;

namespace {

struct Ledger
{
    int failed = 0;

    void report(const std::string& id, bool ok, const std::string& detail)
    {
        std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
        std::fflush(stdout);
        if (!ok)
            ++failed;
    }
};

struct MaxPrincipleTally
{
    std::int64_t solves = 0;
    std::int64_t failures = 0;
    double worst = 0.0;

    void add(std::int64_t s, std::int64_t f, double w)
    {
        solves += s;
        failures += f;
        worst = std::max(worst, w);
    }
    void add(const RunDiagnostics& d) { add(d.elliptic_solves, d.max_principle_failures, d.max_principle_worst_excess); }
};

std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path output_root()
{
    const fs::path root = fs::temp_directory_path() / "chemofront_acceptance";
    fs::create_directories(root);
    return root;
}

/// Runs a table preset one column at a time so each column is timed.
struct TimedTable
{
    SpeedTable table;
    double slowest_column = 0.0;
};

TimedTable timed_table(const std::string& id)
{
    const Preset& preset = find_preset(id);
    TrialSetup setup;
    setup.cells = preset.cells;
    setup.horizon = preset.horizon;
    setup.run.sample_every = preset.sample_every;
    TimedTable out;
    out.table.axis = preset.axis;
    out.table.report_times = preset.report_times;
    out.table.cells.assign(preset.report_times.size(), {});
    for (double v : preset.values) {
        const auto t0 = std::chrono::steady_clock::now();
        const SpeedTable col = sweep(preset.params, preset.axis, {v}, preset.report_times, setup);
        out.slowest_column = std::max(out.slowest_column, seconds_since(t0));
        out.table.values.push_back(v);
        for (std::size_t r = 0; r < col.cells.size(); ++r)
            out.table.cells[r].push_back(col.cells[r][0]);
        out.table.errors.push_back(col.errors[0]);
        out.table.diagnostics.push_back(col.diagnostics[0]);
    }
    write_table_artifacts(out.table, output_root() / id);
    return out;
}

double final_row(const SpeedTable& t, std::size_t col)
{
    const auto& cell = t.cells.back()[col];
    return cell ? *cell : std::nan("");
}

/// Front-fixed Fisher-KPP update from the undivided difference equation.
void fisher_kpp_step(std::vector<double>& w, double& g, double a, double b, double nu, double tau)
{
    const std::size_t M = w.size() - 1;
    const double h = 1.0 / static_cast<double>(M);
    const double g_next = g + tau * nu / h * (4.0 * w[M - 1] - w[M - 2]);
    std::vector<double> out(M + 1, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        const double z = static_cast<double>(j) * h;
        const double wl = j == 0 ? w[1] : w[j - 1];
        const double wz = (w[j + 1] - wl) / (2.0 * h);
        const double lap = (wl - 2.0 * w[j] + w[j + 1]) / (h * h);
        const double rhs = lap + a * w[j] * g - b * w[j] * w[j] * g + 0.5 * z * wz * (g_next - g) / tau;
        out[j] = w[j] + tau / g * rhs;
    }
    w = out;
    g = g_next;
}

void speed_tables(Ledger& ledger, MaxPrincipleTally& mp)
{
    const std::vector<double> chemo_published{0.691, 0.692, 0.684, 0.681, 0.673};
    const std::vector<double> fisher_published{0.689, 0.690, 0.690, 0.689, 0.689};

    const TimedTable chemo = timed_table("table3_11");
    const TimedTable fisher = timed_table("table3_12");
    for (const auto& d : chemo.table.diagnostics)
        mp.add(d);
    for (const auto& d : fisher.table.diagnostics)
        mp.add(d);

    bool ok1 = chemo.slowest_column <= 300.0;
    std::string d1;
    for (std::size_t c = 0; c < chemo_published.size(); ++c) {
        const double v = final_row(chemo.table, c);
        ok1 = ok1 && std::abs(v - chemo_published[c]) <= 0.02;
        d1 += "sigma=" + format_number(chemo.table.values[c]) + " " + fmt("%.4f", v) + " (published " +
              fmt("%.3f", chemo_published[c]) + ") ";
    }
    d1 += "slowest column " + fmt("%.1f", chemo.slowest_column) + " s";
    ledger.report("1 speed table with chemotaxis, T=10 within 0.02", ok1, d1);

    bool ok2a = fisher.slowest_column <= 300.0;
    bool ok2b = true;
    std::string d2;
    for (std::size_t c = 0; c < fisher_published.size(); ++c) {
        const double v = final_row(fisher.table, c);
        ok2a = ok2a && std::abs(v - fisher_published[c]) <= 0.02;
        d2 += "sigma=" + format_number(fisher.table.values[c]) + " " + fmt("%.4f", v);
        if (fisher.table.values[c] >= 0.1) {
            const double gap = std::abs(v - final_row(chemo.table, c));
            ok2b = ok2b && gap <= 0.01;
            d2 += " (gap to chemotaxis " + fmt("%.4f", gap) + ")";
        }
        d2 += " ";
    }
    ledger.report("2a speed table without chemotaxis, T=10 within 0.02", ok2a, d2);
    ledger.report("2b chemotaxis independence, |difference| <= 0.01 for sigma >= 0.1", ok2b, d2);
}

void dichotomy(Ledger& ledger, MaxPrincipleTally& mp, std::optional<Trajectory>& ex1)
{
    const fs::path root = output_root();
    const double l_star = critical_length(2.0);
    std::string detail;
    bool ok = true;
    for (const char* id : {"ex3_1", "ex3_2", "ex3_3"}) {
        const PresetResult r = run_preset(id, root);
        const Trajectory& traj = *r.trajectory;
        mp.add(traj.diagnostics);
        const Outcome o = classify(traj);
        const bool want_vanish = std::string(id) == "ex3_2";
        bool this_ok = o.kind == (want_vanish ? OutcomeKind::Vanishing : OutcomeKind::Spreading);
        if (want_vanish)
            this_ok = this_ok && o.final_h < l_star && o.final_sup_w < 1e-3 && traj.final_time() < 50.0 + traj.grid.tau();
        ok = ok && this_ok;
        detail += std::string(id) + " " + to_string(o.kind) + " (T=" + fmt("%.4f", traj.final_time()) + ", h=" + fmt("%.4f", o.final_h) +
                  ", max w=" + fmt("%.3g", o.final_sup_w) + ") ";
        if (std::string(id) == "ex3_1")
            ex1 = traj;
    }
    ledger.report("3 dichotomy presets", ok, detail + "l*=" + fmt("%.4f", l_star));
}

void nu_bisection(Ledger& ledger, MaxPrincipleTally& mp)
{
    const PresetResult r = run_preset("ex3_6", output_root());
    const BisectionResult& b = *r.bisection;
    for (const auto& st : b.history)
        mp.add(st.elliptic_solves, st.max_principle_failures, st.max_principle_worst_excess);
    const bool inside = b.lower > 0.02 && b.upper < 0.06;
    const bool overlaps = std::min(b.upper, 0.05) > std::max(b.lower, 0.025);
    const bool narrow = b.upper - b.lower <= 0.005;
    const bool budget = b.simulations <= 20;
    ledger.report("4 critical nu bisection", inside && overlaps && narrow && budget,
                  "bracket (" + fmt("%.5f", b.lower) + ", " + fmt("%.5f", b.upper) + ") width " +
                      fmt("%.5f", b.upper - b.lower) + " after " + std::to_string(b.simulations) + " simulations");
}

/// Largest tau with tau <= 0.9 min(tau0(T), g0 h^2 / 2) for T = steps * tau.
double self_consistent_step(const ModelParams& p, int cells, std::int64_t steps)
{
    auto admissible = [&](double tau) {
        return tau <= 0.9 * stable_timestep_for(p, cells, static_cast<double>(steps) * tau);
    };
    double lo = 0.0;
    double hi = 0.9 * 0.5 * p.h0 * p.h0 / (cells * static_cast<double>(cells));
    if (admissible(hi))
        return hi;
    lo = hi * 1e-30;
    for (int k = 0; k < 200 && hi / lo > 1.0 + 1e-12; ++k) {
        const double mid = std::sqrt(lo * hi);
        (admissible(mid) ? lo : hi) = mid;
    }
    return lo;
}

void positivity_suite(Ledger& ledger)
{
    std::mt19937_64 rng(1729);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::int64_t steps = 10000;
    int draws = 0;
    int negative = 0;
    int envelope = 0;
    int front = 0;
    int rejected = 0;
    double worst_ratio = 0.0;
    double smallest_tau = 1.0;
    while (draws < 200) {
        ModelParams p;
        p.a = 0.5 + 2.5 * unit(rng);
        p.b = 0.5 + 2.5 * unit(rng);
        p.chi1 = 0.3 * unit(rng);
        p.chi2 = 0.3 * unit(rng);
        p.lambda1 = 0.5 + 2.5 * unit(rng);
        p.lambda2 = 0.5 + 2.5 * unit(rng);
        p.mu1 = 0.5 + 2.5 * unit(rng);
        p.mu2 = 0.5 + 2.5 * unit(rng);
        p.nu = 0.01 + 2.0 * unit(rng);
        p.sigma = 0.01 + 3.0 * unit(rng);
        p.h0 = 0.5 + 3.5 * unit(rng);
        const int cells = 16 + static_cast<int>(48 * unit(rng));
        const HypothesisReport hyp = check_hypotheses(p);
        if (!(hyp.h1_holds && hyp.h2_holds && hyp.h3_holds)) {
            ++rejected;
            continue;
        }
        ++draws;
        const double tau = self_consistent_step(p, cells, steps);
        smallest_tau = std::min(smallest_tau, tau);
        RunOptions o;
        o.sample_every = 1e300;
        const Trajectory traj = run(p, build_grid(cells, tau, static_cast<double>(steps) * tau), o);
        const auto& d = traj.diagnostics;
        if (d.min_w_seen < 0.0)
            ++negative;
        if (d.envelope_ratio_max > 1.0)
            ++envelope;
        if (!d.front_monotone)
            ++front;
        worst_ratio = std::max(worst_ratio, d.envelope_ratio_max);
    }
    ledger.report("5 positivity, envelope and monotone front over 200 draws x 10^4 steps",
                  negative == 0 && envelope == 0 && front == 0,
                  "negative " + std::to_string(negative) + ", envelope exceeded " + std::to_string(envelope) +
                      ", front decreased " + std::to_string(front) + "; worst ||w||/envelope " +
                      fmt("%.4f", worst_ratio) + ", smallest tau " + fmt("%.3g", smallest_tau) + ", " +
                      std::to_string(rejected) + " draws rejected by the hypotheses");
}

void oracles(Ledger& ledger)
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> size(3, 50);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        TridiagonalSystem sys;
        sys.resize(static_cast<std::size_t>(size(rng)));
        for (std::size_t i = 0; i < sys.size(); ++i) {
            sys.lower[i] = i ? unit(rng) : 0.0;
            sys.upper[i] = i + 1 < sys.size() ? unit(rng) : 0.0;
            sys.diag[i] = (std::abs(sys.lower[i]) + std::abs(sys.upper[i]) + 0.1 + std::abs(unit(rng))) *
                          (unit(rng) < 0.0 ? -1.0 : 1.0);
            sys.rhs[i] = unit(rng);
        }
        const auto x = solve_tridiagonal(sys);
        const auto y = solve_dense_oracle(sys);
        for (std::size_t i = 0; i < x.size(); ++i)
            worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    const bool ok_solver = worst <= 1e-12;

    ModelParams p;
    p.h0 = 2.0;
    p.nu = 0.8;
    const int M = 64;
    const double tau = choose_timestep(p, M, 1.0, StepPolicy::DiffusionLimited);
    const GridSpec grid = build_grid(M, tau, 100 * tau);
    SimState s = sample_initial(p, grid);
    std::vector<double> w = s.w;
    double g = s.g;
    std::vector<double> scratch;
    double pipeline = 0.0;
    for (int k = 0; k < 100; ++k) {
        step(s, p, grid, scratch);
        refresh_chemicals(s, p, grid);
        fisher_kpp_step(w, g, p.a, p.b, p.nu, tau);
        pipeline = std::max(pipeline, std::abs(s.g - g));
        for (std::size_t j = 0; j < w.size(); ++j)
            pipeline = std::max(pipeline, std::abs(s.w[j] - w[j]));
    }
    const bool ok_pipeline = pipeline <= 1e-12;
    ledger.report("7 oracle equivalence", ok_solver && ok_pipeline,
                  "Thomas vs dense max diff " + fmt("%.3g", worst) + " over 1000 systems; pipeline vs Fisher-KPP " +
                      fmt("%.3g", pipeline) + " over 100 steps");
}

void convergence(Ledger& ledger)
{
    ModelParams p;
    p.h0 = 2.0;
    p.nu = 0.8;
    const double tau = 0.9 * 0.5 * p.h0 * p.h0 / (50.0 * 50.0);
    const ConvergenceReport r = convergence_study(p, 50, tau, 1.0, 3);
    write_convergence_artifacts(r, output_root() / "convergence");
    const double order = r.orders.empty() ? std::nan("") : r.orders[0];
    ledger.report("8 self-convergence order >= 1.8 (M = 50, 100, 200)", order >= 1.8,
                  "differences " + fmt("%.3g", r.differences[0]) + ", " + fmt("%.3g", r.differences[1]) +
                      "; order " + fmt("%.3f", order));
}

void persistence(Ledger& ledger, const Trajectory& ex1)
{
    const double T = ex1.final_time();
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& s : ex1.samples)
        if (s.t >= 0.75 * T) {
            lo = std::min(lo, s.w_at_0);
            hi = std::max(hi, s.w_at_0);
        }
    ledger.report("9 w(0) within 0.05 of a/b over the last quarter", lo >= 1.95 && hi <= 2.05,
                  "w(0) in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "] for t in [" + fmt("%.1f", 0.75 * T) +
                      ", " + fmt("%.1f", T) + "], final h " + fmt("%.4f", ex1.final_state.front()));

    const PresetResult r = run_preset("ex3_16b", output_root());
    double sum = 0.0;
    int n = 0;
    const double T2 = r.trajectory->final_time();
    for (const auto& s : r.trajectory->samples)
        if (s.t >= 0.75 * T2) {
            sum += s.w_at_0;
            ++n;
        }
    std::printf("[INFO] 9 lambda1 < lambda2 variant plateau: mean w(0) over the last quarter %.4f (not asserted)\n",
                sum / n);
}

}  // namespace

int main()
{
    Ledger ledger;
    MaxPrincipleTally mp;
    std::optional<Trajectory> ex1;
    const auto t0 = std::chrono::steady_clock::now();

    oracles(ledger);
    convergence(ledger);
    positivity_suite(ledger);
    speed_tables(ledger, mp);
    dichotomy(ledger, mp, ex1);
    nu_bisection(ledger, mp);
    ledger.report("6 discrete maximum principle on every solve of criteria 1-4", mp.failures == 0 && mp.worst <= 1e-9,
                  std::to_string(mp.solves) + " solves, " + std::to_string(mp.failures) + " failures, worst excess " +
                      fmt("%.3g", mp.worst));
    persistence(ledger, *ex1);

    std::printf("%d criteria failed; %.0f s; artifacts in %s\n", ledger.failed, seconds_since(t0),
                output_root().string().c_str());
    return ledger.failed == 0 ? 0 : 1;
}
