#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace chemofront {

/// Constant-coefficient attraction-repulsion chemotaxis model with a free
/// boundary, plus the amplitude and habitat of the cosine initial density
/// u0(x) = sigma * cos(pi x / (2 h0)).
struct ModelParams
{
    double a = 2.0;        ///< logistic growth rate
    double b = 1.0;        ///< logistic damping
    double chi1 = 0.0;     ///< attraction sensitivity
    double chi2 = 0.0;     ///< repulsion sensitivity
    double lambda1 = 1.0;  ///< decay of the attractant
    double lambda2 = 1.0;  ///< decay of the repellent
    double mu1 = 0.0;      ///< production of the attractant
    double mu2 = 0.0;      ///< production of the repellent
    double nu = 1.0;       ///< free-boundary moving speed
    double sigma = 1.0;    ///< initial amplitude
    double h0 = 1.0;       ///< initial habitat length

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

/// Raised when a derived constant is undefined because a standing
/// hypothesis fails (non-positive denominator).
class HypothesisViolation : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

double compute_M(const ModelParams& p);
double compute_K(const ModelParams& p);

/// a / (b + chi2 mu2 - chi1 mu1 - M); requires (H1).
double compute_M0(const ModelParams& p);

/// Lower persistence level; positive whenever (H2) holds.
double compute_m0(const ModelParams& p);

struct HypothesisReport
{
    double M_value = 0.0;
    double K_value = 0.0;
    std::optional<double> M0_value;  ///< absent when (H1) fails
    std::optional<double> m0_value;  ///< absent when a denominator is non-positive
    bool h1_holds = false;
    bool h2_holds = false;
    bool h3_holds = false;
    double h1_margin = 0.0;  ///< b minus the right-hand side of (H1)
    double h2_margin = 0.0;
    double h3_margin = 0.0;

    /// One line per failed hypothesis; empty when all hold.
    std::string warnings() const;
};

/// Never throws on valid parameters: failures are reported, not enforced.
HypothesisReport check_hypotheses(const ModelParams& p);

/// l* = (pi/2) sqrt(1/a). Initial habitats at least this long always spread.
double critical_length(double a);

/// Breakdown of the explicit-step bound.
struct StableStepBounds
{
    double front_branch = 0.0;       ///< keeps w_{M-1} positive (front monotone)
    double positivity_branch = 0.0;  ///< keeps the central coefficient positive
    double diffusion_cap = 0.0;      ///< g0 h^2 / 2
    double envelope_level = 0.0;     ///< U = max(||w0||, M0) used in the growth envelope

    double value() const;
};

/// Inputs: mesh width h, initial g0 = h0^2, horizon T, the sup norm of the
/// initial density and its value at the node next to the front.
StableStepBounds stable_step_bounds(const ModelParams& p, double h, double g0, double horizon,
                                    double w0_maxnorm, double w0_front);

/// tau0 capped by the explicit diffusion limit; a branch whose denominator
/// is non-positive imposes no constraint.
double max_stable_timestep(const ModelParams& p, double h, double g0, double horizon,
                           double w0_maxnorm, double w0_front);

/// e^{(a + U (chi1 mu1 + chi2 mu2)) t} ||w0||, the sup-norm envelope.
double growth_envelope(const ModelParams& p, double envelope_level, double t, double w0_maxnorm);

/// U = max(||w0||, M0), falling back to ||w0|| when M0 is undefined.
double envelope_level(const ModelParams& p, double w0_maxnorm);

}  // namespace chemofront
