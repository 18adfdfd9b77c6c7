#include "chemofront/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "chemofront/elliptic.hpp"

namespace chemofront {

ChemoTerms chemo_terms(int j, std::span<const double> v1, std::span<const double> v2,
                       const ModelParams& p)
{
    const auto jj = static_cast<std::size_t>(j);
    const std::size_t left = j == 0 ? 1 : jj - 1;
    ChemoTerms t;
    t.drift = -p.chi1 * (v1[jj + 1] - v1[left]) + p.chi2 * (v2[jj + 1] - v2[left]);
    t.linear = -p.chi1 * p.lambda1 * v1[jj] + p.chi2 * p.lambda2 * v2[jj] + p.a;
    t.quadratic = p.chi1 * p.mu1 - p.chi2 * p.mu2 - p.b;
    return t;
}

double stefan_increment(const SimState& s, const ModelParams& p, const GridSpec& grid)
{
    const auto M = static_cast<std::size_t>(grid.cells());
    return grid.tau() * p.nu / grid.width() * (4.0 * s.w[M - 1] - s.w[M - 2]);
}

StepDiagnostics step(SimState& s, const ModelParams& p, const GridSpec& grid,
                     std::vector<double>& scratch)
{
    const int M = grid.cells();
    const auto n = static_cast<std::size_t>(M) + 1;
    const double h = grid.width();
    const double tau = grid.tau();
    const double g = s.g;
    const double r = tau / (h * h);
    const double front_slope = p.nu * (4.0 * s.w[n - 2] - s.w[n - 3]);
    const double dg = stefan_increment(s, p, grid);

    StepDiagnostics d;
    d.front_increment = dg;
    d.min_coeff_a = d.min_coeff_b = d.min_coeff_c = std::numeric_limits<double>::infinity();

    scratch.resize(n);
    const std::span<const double> w = s.w;
    for (int j = 0; j < M; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const ChemoTerms ct = chemo_terms(j, s.v1, s.v2, p);
        const double advect = grid.node(j) * front_slope;
        const double ca = r * (1.0 / g - (advect + ct.drift) / (4.0 * g));
        const double cb = 1.0 - 2.0 * r / g + ct.linear * tau + ct.quadratic * tau * w[jj];
        const double cc = r * (1.0 / g + (advect + ct.drift) / (4.0 * g));
        const double left = j == 0 ? w[1] : w[jj - 1];
        scratch[jj] = ca * left + cb * w[jj] + cc * w[jj + 1];
        d.min_coeff_a = std::min(d.min_coeff_a, ca);
        d.min_coeff_b = std::min(d.min_coeff_b, cb);
        d.min_coeff_c = std::min(d.min_coeff_c, cc);
    }
    scratch[n - 1] = 0.0;

    const double g_next = g + dg;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t j = 0; j < n; ++j) {
        const double v = scratch[j];
        if (!std::isfinite(v))
            throw NumericalAbort("non-finite density at node " + std::to_string(j) + " in step " +
                                     std::to_string(s.step + 1),
                                 s.step + 1);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!std::isfinite(g_next) || !(g_next > 0.0))
        throw NumericalAbort("invalid front value g = " + std::to_string(g_next) + " in step " +
                                 std::to_string(s.step + 1),
                             s.step + 1);

    s.w.swap(scratch);
    s.g = g_next;
    ++s.step;
    s.t = static_cast<double>(s.step) * tau;

    d.min_w = lo;
    d.max_w = hi;
    d.positivity_ok = d.min_coeff_a >= 0.0 && d.min_coeff_b >= 0.0 && d.min_coeff_c >= 0.0;
    return d;
}

StepDiagnostics step(SimState& s, const ModelParams& p, const GridSpec& grid)
{
    std::vector<double> scratch;
    return step(s, p, grid, scratch);
}

double stable_timestep_for(const ModelParams& p, int cells, double horizon)
{
    const double h = 1.0 / cells;
    const double w_front = p.sigma * std::cos(0.5 * std::numbers::pi * (cells - 1) * h);
    return max_stable_timestep(p, h, p.h0 * p.h0, horizon, p.sigma, w_front);
}

double choose_timestep(const ModelParams& p, int cells, double horizon, StepPolicy policy)
{
    const double h = 1.0 / cells;
    if (policy == StepPolicy::DiffusionLimited)
        return 0.9 * 0.5 * p.h0 * p.h0 * h * h;
    return 0.9 * stable_timestep_for(p, cells, horizon);
}

double Trajectory::front_at(double t) const
{
    if (samples.empty())
        return 0.0;
    if (t <= samples.front().t)
        return samples.front().h;
    if (t >= samples.back().t)
        return samples.back().h;
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const TrajectorySample& s, double v) { return s.t < v; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double f = (t - lo.t) / (hi.t - lo.t);
    return lo.h + f * (hi.h - lo.h);
}

Snapshot make_snapshot(const SimState& s, const GridSpec& grid)
{
    Snapshot snap;
    snap.t = s.t;
    snap.z = grid.nodes();
    snap.x = physical_coordinates(s, grid);
    snap.w = s.w;
    snap.v1 = s.v1;
    snap.v2 = s.v2;
    return snap;
}

namespace {

class Recorder
{
  public:
    Recorder(Trajectory& traj, const RunOptions& options) : traj_(traj), options_(options)
    {
        snapshot_times_ = options.snapshot_times;
        std::sort(snapshot_times_.begin(), snapshot_times_.end());
    }

    void record(const SimState& s)
    {
        TrajectorySample smp;
        smp.t = s.t;
        smp.h = s.front();
        smp.h_over_t = s.t > 0.0 ? smp.h / s.t : 0.0;
        smp.sup_w = s.sup_norm();
        smp.w_at_0 = s.w.front();
        if (!traj_.samples.empty()) {
            const double h0 = traj_.samples.front().h;
            const double window = options_.speed_window;
            if (s.t >= window)
                smp.dh_dt = (smp.h - traj_.front_at(s.t - window)) / window;
            else if (s.t > 0.0)
                smp.dh_dt = (smp.h - h0) / s.t;
        }
        traj_.samples.push_back(smp);
        next_sample_ = static_cast<double>(++sample_index_) * options_.sample_every;
    }

    void maybe_record(const SimState& s, bool last)
    {
        if (last || s.t >= next_sample_ - 1e-12 * options_.sample_every)
            record(s);
    }

    void maybe_snapshot(const SimState& s, const GridSpec& grid, double tau, bool last)
    {
        while (next_snapshot_ < snapshot_times_.size()) {
            const double ts = snapshot_times_[next_snapshot_];
            // nearest step to the requested time
            if (s.t + 0.5 * tau >= ts || last) {
                if (ts <= s.t + 0.5 * tau)
                    traj_.snapshots.push_back(make_snapshot(s, grid));
                ++next_snapshot_;
                continue;
            }
            break;
        }
    }

  private:
    Trajectory& traj_;
    const RunOptions& options_;
    std::vector<double> snapshot_times_;
    std::size_t next_snapshot_ = 0;
    std::int64_t sample_index_ = 0;
    double next_sample_ = 0.0;
};

}  // namespace

Trajectory run_from(const ModelParams& p, const GridSpec& grid, SimState state,
                    const RunOptions& options)
{
    p.validate();
    if (!(options.sample_every > 0.0))
        throw std::invalid_argument("sample_every must be positive");
    if (!(options.speed_window > 0.0))
        throw std::invalid_argument("speed_window must be positive");
    const auto n = static_cast<std::size_t>(grid.cells()) + 1;
    if (state.w.size() != n || state.v1.size() != n || state.v2.size() != n)
        throw std::invalid_argument("run: state does not match the grid");

    Trajectory traj{p, grid, {}, {}, {}, {}};
    RunDiagnostics& diag = traj.diagnostics;

    const double w0_norm = state.sup_norm();
    diag.stable_step = max_stable_timestep(p, grid.width(), state.g, grid.horizon(), w0_norm,
                                           state.w[n - 2]);
    diag.step_exceeds_bound = grid.tau() > diag.stable_step;
    if (diag.step_exceeds_bound && !options.allow_unstable_step)
        throw std::invalid_argument("tau = " + std::to_string(grid.tau()) +
                                    " exceeds the stable bound " + std::to_string(diag.stable_step) +
                                    "; pass the override to run anyway");
    diag.envelope_level = envelope_level(p, w0_norm);
    diag.min_w_seen = *std::min_element(state.w.begin(), state.w.end());

    auto check_chemicals = [&](const SimState& s) {
        diag.elliptic_solves += 2;
        for (auto [v, lambda, mu] : {std::tuple{&s.v1, p.lambda1, p.mu1}, std::tuple{&s.v2, p.lambda2, p.mu2}}) {
            const auto rep = check_max_principle(*v, s.w, lambda, mu);
            diag.max_principle_worst_excess = std::max(diag.max_principle_worst_excess, rep.worst_excess);
            if (!rep.ok)
                ++diag.max_principle_failures;
        }
    };
    check_chemicals(state);

    Recorder recorder(traj, options);
    recorder.record(state);
    recorder.maybe_snapshot(state, grid, grid.tau(), false);

    const std::int64_t total = grid.step_count();
    std::vector<double> scratch(n);
    TridiagonalSystem sys;
    std::vector<double> solve_scratch;
    for (std::int64_t k = 0; k < total; ++k) {
        const double g_before = state.g;
        const StepDiagnostics sd = step(state, p, grid, scratch);

        assemble_chemical_into(p.lambda1, p.mu1, state.g, state.w, sys);
        solve_tridiagonal_into(sys, state.v1, solve_scratch);
        assemble_chemical_into(p.lambda2, p.mu2, state.g, state.w, sys);
        solve_tridiagonal_into(sys, state.v2, solve_scratch);
        check_chemicals(state);

        if (!sd.positivity_ok) {
            ++diag.negative_coefficient_steps;
            if (!diag.first_coefficient_warning)
                diag.first_coefficient_warning = state.step;
        }
        diag.min_w_seen = std::min(diag.min_w_seen, sd.min_w);
        if (sd.min_w < 0.0 && !diag.first_negative_step)
            diag.first_negative_step = state.step;
        if (state.g < g_before) {
            diag.front_monotone = false;
            if (!diag.first_front_decrease)
                diag.first_front_decrease = state.step;
        }
        if (w0_norm > 0.0) {
            const double env = growth_envelope(p, diag.envelope_level, state.t, w0_norm);
            diag.envelope_ratio_max = std::max(diag.envelope_ratio_max, std::max(std::abs(sd.min_w), sd.max_w) / env);
        }

        const bool last = k + 1 == total;
        recorder.maybe_record(state, last);
        recorder.maybe_snapshot(state, grid, grid.tau(), last);
    }
    diag.steps = total;
    traj.final_state = std::move(state);
    return traj;
}

Trajectory run(const ModelParams& p, const GridSpec& grid, const RunOptions& options)
{
    return run_from(p, grid, sample_initial(p, grid), options);
}

}  // namespace chemofront
