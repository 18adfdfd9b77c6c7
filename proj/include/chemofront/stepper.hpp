#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "chemofront/grid.hpp"
#include "chemofront/model.hpp"

namespace chemofront {

/// Chemotactic contributions at node j after eliminating v_xx through the
/// elliptic equations.
struct ChemoTerms
{
    double drift = 0.0;      ///< -chi1 (V1_{j+1} - V1_{j-1}) + chi2 (V2_{j+1} - V2_{j-1})
    double linear = 0.0;     ///< -chi1 lambda1 V1_j + chi2 lambda2 V2_j + a
    double quadratic = 0.0;  ///< chi1 mu1 - chi2 mu2 - b
};

/// Valid for 0 <= j <= M-1; j = 0 reflects V_{-1} = V_1.
ChemoTerms chemo_terms(int j, std::span<const double> v1, std::span<const double> v2,
                       const ModelParams& p);

/// Increment of g over one step from the three-point one-sided derivative
/// at the front: (tau nu / h)(4 w_{M-1} - w_{M-2}).
double stefan_increment(const SimState& s, const ModelParams& p, const GridSpec& grid);

struct StepDiagnostics
{
    double min_w = 0.0;
    double max_w = 0.0;
    double front_increment = 0.0;
    double min_coeff_a = 0.0;
    double min_coeff_b = 0.0;
    double min_coeff_c = 0.0;
    bool positivity_ok = true;
};

/// Non-finite value produced; the run cannot continue.
class NumericalAbort : public std::runtime_error
{
  public:
    NumericalAbort(const std::string& what, std::int64_t step)
        : std::runtime_error(what), step_(step)
    {
    }
    std::int64_t step() const { return step_; }

  private:
    std::int64_t step_;
};

/// One explicit step. Requires s.v1, s.v2 solved for the current (w, g);
/// leaves them stale (the caller re-solves). `scratch` is reused storage.
StepDiagnostics step(SimState& s, const ModelParams& p, const GridSpec& grid,
                     std::vector<double>& scratch);
StepDiagnostics step(SimState& s, const ModelParams& p, const GridSpec& grid);

enum class StepPolicy
{
    Stable,           ///< 0.9 min(tau0, g0 h^2 / 2)
    DiffusionLimited  ///< 0.9 g0 h^2 / 2, ignores tau0 (may exceed it)
};

/// Bound on tau for the cosine initial data of p on an M-cell grid over [0, T].
double stable_timestep_for(const ModelParams& p, int cells, double horizon);
double choose_timestep(const ModelParams& p, int cells, double horizon, StepPolicy policy);

struct TrajectorySample
{
    double t = 0.0;
    double h = 0.0;
    double h_over_t = 0.0;
    double dh_dt = 0.0;  ///< (h(t) - h(t - window)) / window, or (h(t) - h0)/t early on
    double sup_w = 0.0;
    double w_at_0 = 0.0;
};

struct Snapshot
{
    double t = 0.0;
    std::vector<double> z;
    std::vector<double> x;
    std::vector<double> w;
    std::vector<double> v1;
    std::vector<double> v2;
};

struct RunOptions
{
    double sample_every = 0.01;
    std::vector<double> snapshot_times;
    double speed_window = 1.0;
    /// Permit tau above the positivity bound (records it in diagnostics).
    bool allow_unstable_step = false;
};

struct RunDiagnostics
{
    std::int64_t steps = 0;
    double stable_step = 0.0;
    bool step_exceeds_bound = false;

    double min_w_seen = 0.0;
    std::optional<std::int64_t> first_negative_step;
    std::optional<std::int64_t> first_coefficient_warning;
    std::int64_t negative_coefficient_steps = 0;

    bool front_monotone = true;
    std::optional<std::int64_t> first_front_decrease;

    std::int64_t elliptic_solves = 0;
    std::int64_t max_principle_failures = 0;
    double max_principle_worst_excess = 0.0;  ///< absolute, over every solve

    double envelope_level = 0.0;
    double envelope_ratio_max = 0.0;  ///< max_n ||w^n|| / envelope(t_n)
};

struct Trajectory
{
    ModelParams params;
    GridSpec grid;
    std::vector<TrajectorySample> samples;
    std::vector<Snapshot> snapshots;
    SimState final_state;
    RunDiagnostics diagnostics;

    double final_time() const { return samples.empty() ? 0.0 : samples.back().t; }
    /// Linear interpolation of h between samples; clamps to the ends.
    double front_at(double t) const;
};

Snapshot make_snapshot(const SimState& s, const GridSpec& grid);

/// Solves chemicals, steps, repeats until t >= T. Throws
/// std::invalid_argument if tau exceeds the stable bound without the
/// override, NumericalAbort on non-finite values.
Trajectory run(const ModelParams& p, const GridSpec& grid, const RunOptions& options = {});

/// Same, starting from a caller-supplied state (chemicals must be current).
Trajectory run_from(const ModelParams& p, const GridSpec& grid, SimState initial,
                    const RunOptions& options = {});

}  // namespace chemofront
