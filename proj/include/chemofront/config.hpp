#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemofront/dynamics.hpp"
#include "chemofront/model.hpp"

namespace chemofront {

enum class RunMode
{
    Simulate,
    Sweep,
    Bisect,
    Convergence,
    Preset
};

const char* to_string(RunMode mode);
std::optional<RunMode> parse_mode(const std::string& text);

/// Malformed line; carries the 1-based line number.
class ConfigParseError : public std::runtime_error
{
  public:
    ConfigParseError(int line, const std::string& message);
    int line() const { return line_; }

  private:
    int line_;
};

/// Well-formed text with an invalid or missing value; names the key.
class ConfigValidationError : public std::invalid_argument
{
  public:
    ConfigValidationError(const std::string& key, const std::string& message);
    const std::string& key() const { return key_; }

  private:
    std::string key_;
};

/// Parsed run description. Keys and defaults:
///
///   a b chi1 chi2 lambda1 lambda2 mu1 mu2 nu sigma h0   required
///   mode            simulate | sweep | bisect | convergence | preset (simulate)
///   cells           M (100)
///   horizon         T (10)
///   tau             explicit step; otherwise chosen from policy
///   policy          diffusion_limited | stable (diffusion_limited)
///   allow_unstable_step   true | false (false; implied by diffusion_limited)
///   sample_every    (0.01)
///   speed_window    (1)
///   snapshot_times  comma list (empty)
///   output_dir      (output)
///   axis, values, report_times (1,...,10)             sweep
///   parameter (nu), lower, upper, tolerance (0.005), max_iterations (20)   bisect
///   refinements     (3)                                convergence
///   preset                                             preset
struct RunConfig
{
    ModelParams params;
    RunMode mode = RunMode::Simulate;
    int cells = 100;
    double horizon = 10.0;
    std::optional<double> tau;
    StepPolicy policy = StepPolicy::DiffusionLimited;
    bool allow_unstable_step = false;
    double sample_every = 0.01;
    double speed_window = 1.0;
    std::vector<double> snapshot_times;
    std::string output_dir = "output";

    std::string axis;
    std::vector<double> values;
    std::vector<double> report_times{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    BisectParameter parameter = BisectParameter::Nu;
    std::optional<double> lower;
    std::optional<double> upper;
    double tolerance = 0.005;
    int max_iterations = 20;

    int refinements = 3;

    std::string preset;

    /// Step actually used: tau if given, else chosen from the policy.
    double resolved_tau() const;
    GridSpec grid() const;
    RunOptions run_options() const;
    TrialSetup trial_setup() const;

    bool operator==(const RunConfig&) const = default;
};

/// The eleven model keys every config must set.
const std::vector<std::string>& required_model_keys();

/// `default_mode` applies when the text has no mode key.
RunConfig parse_config(const std::string& text, RunMode default_mode = RunMode::Simulate);
/// Inverse of parse_config; every key written, doubles in shortest
/// round-trip form.
std::string render_config(const RunConfig& config);
RunConfig load_config(const std::string& path, RunMode default_mode = RunMode::Simulate);

/// Throws ConfigValidationError on the first inconsistent field.
void validate(const RunConfig& config);

}  // namespace chemofront
