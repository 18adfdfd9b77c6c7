#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemofront/stepper.hpp"

namespace chemofront {

enum class OutcomeKind
{
    Spreading,
    Vanishing,
    Undecided
};

const char* to_string(OutcomeKind kind);

/// Dichotomy thresholds. Spreading: h(T) > spread_factor * l* and the
/// trailing windowed speed exceeds spread_speed. Vanishing: ||w(T)|| below
/// vanish_sup and the trailing growth rate of g below vanish_front_rate.
struct ClassifyThresholds
{
    double spread_factor = 2.0;
    double spread_speed = 1e-3;
    double vanish_sup = 1e-3;
    double vanish_front_rate = 1e-4;
    double window = 1.0;
};

struct Outcome
{
    OutcomeKind kind = OutcomeKind::Undecided;
    double final_h = 0.0;
    double final_sup_w = 0.0;
    std::optional<double> speed;
    double critical_length = 0.0;
    std::string evidence;
};

Outcome classify(const Trajectory& traj, const ClassifyThresholds& thresholds = {});

class InsufficientData : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// (h(T) - h(T - window)) / window at the end of the trajectory.
double spreading_speed(const Trajectory& traj, double window = 1.0);
/// Same slope ending at an arbitrary report time t <= final time; for
/// t < window the slope is taken from t = 0.
double spreading_speed_at(const Trajectory& traj, double t, double window = 1.0);

enum class BisectParameter
{
    Nu,
    Sigma
};

const char* to_string(BisectParameter which);

class BracketError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct BisectionStep
{
    double value = 0.0;
    OutcomeKind kind = OutcomeKind::Undecided;
    bool horizon_extended = false;
    std::string evidence;
    /// Summed over every run of this trial (two if the horizon was extended).
    std::int64_t elliptic_solves = 0;
    std::int64_t max_principle_failures = 0;
    double max_principle_worst_excess = 0.0;
};

struct BisectionResult
{
    BisectParameter parameter = BisectParameter::Nu;
    double lower = 0.0;  ///< vanishing side
    double upper = 0.0;  ///< spreading side
    int iterations = 0;
    int simulations = 0;
    OutcomeKind lower_kind = OutcomeKind::Vanishing;
    OutcomeKind upper_kind = OutcomeKind::Spreading;
    std::vector<BisectionStep> history;
};

/// How each trial simulation is configured.
struct TrialSetup
{
    int cells = 100;
    double horizon = 30.0;
    StepPolicy policy = StepPolicy::DiffusionLimited;
    RunOptions run;  ///< allow_unstable_step is forced on for DiffusionLimited
    ClassifyThresholds thresholds;
};

/// Runs one trial and classifies it, doubling the horizon once if the
/// outcome is undecided and then resolving by trend (h above l* spreads,
/// otherwise the sign of the trailing change in ||w|| decides).
BisectionStep classify_trial(const ModelParams& p, const TrialSetup& setup);

BisectionResult bisect_critical(BisectParameter which, double lo, double hi, double tol,
                                const ModelParams& base, const TrialSetup& setup,
                                int max_iterations = 20);

/// Assigns a named model parameter (a, b, chi1, ..., sigma, h0).
void set_parameter(ModelParams& p, const std::string& name, double value);
double get_parameter(const ModelParams& p, const std::string& name);
bool is_parameter_name(const std::string& name);

struct SpeedTable
{
    std::string axis;
    std::vector<double> values;        ///< one column per value
    std::vector<double> report_times;  ///< one row per time
    /// cells[row][col]; absent when that column's run failed
    std::vector<std::vector<std::optional<double>>> cells;
    std::vector<std::string> errors;  ///< per column, empty on success
    std::vector<RunDiagnostics> diagnostics;  ///< per column
};

/// Independent runs per value, evaluated concurrently; row order and
/// content do not depend on completion order.
SpeedTable sweep(const ModelParams& base, const std::string& axis, const std::vector<double>& values,
                 const std::vector<double>& report_times, const TrialSetup& setup,
                 double window = 1.0);

}  // namespace chemofront
