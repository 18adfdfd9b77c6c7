#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemofront/convergence.hpp"
#include "chemofront/dynamics.hpp"

namespace chemofront {

class UnknownPreset : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

enum class PresetKind
{
    Single,
    Table,
    Bisection
};

struct Preset
{
    std::string id;
    std::string title;
    PresetKind kind = PresetKind::Single;
    ModelParams params;
    int cells = 100;
    double horizon = 50.0;
    double sample_every = 0.05;
    std::vector<double> snapshot_times;
    /// Table presets
    std::string axis;
    std::vector<double> values;
    std::vector<double> report_times;
    /// Bisection presets
    double lower = 0.0;
    double upper = 0.0;
    double tolerance = 0.005;
};

const std::vector<Preset>& presets();
/// Throws UnknownPreset listing the valid ids.
const Preset& find_preset(const std::string& id);

struct PresetResult
{
    std::vector<std::filesystem::path> files;
    std::optional<Trajectory> trajectory;
    std::optional<SpeedTable> table;
    std::optional<BisectionResult> bisection;
    std::string summary;
};

/// Writes into `root / id`.
PresetResult run_preset(const std::string& id, const std::filesystem::path& root);

/// timeseries.csv, snapshot_t<time>.csv per snapshot, and front/speed/
/// density/profile plots. Returns the written paths.
std::vector<std::filesystem::path> write_run_artifacts(const Trajectory& traj,
                                                       const std::filesystem::path& dir);
/// speed_table.csv and speeds.svg.
std::vector<std::filesystem::path> write_table_artifacts(const SpeedTable& table,
                                                         const std::filesystem::path& dir);
/// bisection.csv with one row per trial.
std::vector<std::filesystem::path> write_bisection_artifacts(const BisectionResult& result,
                                                             const std::filesystem::path& dir);
/// convergence.csv with one row per level.
std::vector<std::filesystem::path> write_convergence_artifacts(const ConvergenceReport& report,
                                                               const std::filesystem::path& dir);

std::string describe(const Outcome& outcome);
std::string describe(const SpeedTable& table);
std::string describe(const BisectionResult& result);
std::string describe(const ConvergenceReport& report);

}  // namespace chemofront
