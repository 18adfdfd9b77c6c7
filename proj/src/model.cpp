#include "chemofront/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace chemofront {

namespace {

double positive_part(double x)
{
    return x > 0.0 ? x : 0.0;
}

void require(bool ok, const char* field, const char* what)
{
    if (!ok)
        throw std::invalid_argument(std::string("ModelParams.") + field + " " + what);
}

double branch(double numerator, double denominator)
{
    if (!(denominator > 0.0))
        return std::numeric_limits<double>::infinity();
    return numerator / denominator;
}

}  // namespace

void ModelParams::validate() const
{
    auto finite = [](double v) { return std::isfinite(v); };
    for (double v : {a, b, chi1, chi2, lambda1, lambda2, mu1, mu2, nu, sigma, h0})
        require(finite(v), "value", "must be finite");
    require(a > 0.0, "a", "must be > 0");
    require(b > 0.0, "b", "must be > 0");
    require(chi1 >= 0.0, "chi1", "must be >= 0");
    require(chi2 >= 0.0, "chi2", "must be >= 0");
    require(lambda1 > 0.0, "lambda1", "must be > 0");
    require(lambda2 > 0.0, "lambda2", "must be > 0");
    require(mu1 >= 0.0, "mu1", "must be >= 0");
    require(mu2 >= 0.0, "mu2", "must be >= 0");
    require(nu > 0.0, "nu", "must be > 0");
    require(sigma >= 0.0, "sigma", "must be >= 0");
    require(h0 > 0.0, "h0", "must be > 0");
}

double compute_M(const ModelParams& p)
{
    const double c1 = p.chi1 * p.mu1;
    const double c2 = p.chi2 * p.mu2;
    const double shared = positive_part(c2 * p.lambda2 - c1 * p.lambda1);
    const double gap = positive_part(p.lambda1 - p.lambda2);
    return std::min((shared + c1 * gap) / p.lambda2, (shared + c2 * gap) / p.lambda1);
}

double compute_K(const ModelParams& p)
{
    const double c1 = p.chi1 * p.mu1;
    const double c2 = p.chi2 * p.mu2;
    const double shared = std::abs(c1 * p.lambda1 - c2 * p.lambda2);
    const double gap = std::abs(p.lambda1 - p.lambda2);
    return std::min((shared + c1 * gap) / p.lambda2, (shared + c2 * gap) / p.lambda1);
}

double compute_M0(const ModelParams& p)
{
    const double denom = p.b + p.chi2 * p.mu2 - p.chi1 * p.mu1 - compute_M(p);
    if (!(denom > 0.0))
        throw HypothesisViolation("M0 undefined: (H1) fails, denominator = " + std::to_string(denom));
    return p.a / denom;
}

double compute_m0(const ModelParams& p)
{
    const double c1 = p.chi1 * p.mu1;
    const double c2 = p.chi2 * p.mu2;
    const double M = compute_M(p);
    const double d1 = p.b - c1 + c2 - M;
    const double d2 = p.b - c1 + c2;
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw HypothesisViolation("m0 undefined: non-positive denominator factor");
    // a_sup / a_inf = 1 for constant coefficients
    return p.a * (p.b - 2.0 * c1 + c2 - M) / (d1 * d2);
}

std::string HypothesisReport::warnings() const
{
    std::ostringstream out;
    if (!h1_holds)
        out << "(H1) fails: margin " << h1_margin << "\n";
    if (!h2_holds)
        out << "(H2) fails: margin " << h2_margin << "\n";
    if (!h3_holds)
        out << "(H3) fails: margin " << h3_margin << "\n";
    return out.str();
}

HypothesisReport check_hypotheses(const ModelParams& p)
{
    HypothesisReport r;
    const double c1 = p.chi1 * p.mu1;
    const double c2 = p.chi2 * p.mu2;
    r.M_value = compute_M(p);
    r.K_value = compute_K(p);
    r.h1_margin = p.b - (c1 - c2 + r.M_value);
    r.h2_margin = p.b - (2.0 * c1 - c2 + r.M_value);
    r.h3_margin = p.b - (c1 - c2 + r.K_value);
    r.h1_holds = r.h1_margin > 0.0;
    r.h2_holds = r.h2_margin > 0.0;
    r.h3_holds = r.h3_margin > 0.0;
    try {
        r.M0_value = compute_M0(p);
    } catch (const HypothesisViolation&) {
    }
    try {
        r.m0_value = compute_m0(p);
    } catch (const HypothesisViolation&) {
    }
    return r;
}

double critical_length(double a)
{
    if (!(a > 0.0))
        throw std::domain_error("critical_length requires a > 0");
    return 0.5 * std::numbers::pi * std::sqrt(1.0 / a);
}

double StableStepBounds::value() const
{
    return std::min({front_branch, positivity_branch, diffusion_cap});
}

double envelope_level(const ModelParams& p, double w0_maxnorm)
{
    const auto report = check_hypotheses(p);
    return report.M0_value ? std::max(w0_maxnorm, *report.M0_value) : w0_maxnorm;
}

double growth_envelope(const ModelParams& p, double level, double t, double w0_maxnorm)
{
    const double rate = p.a + level * (p.chi1 * p.mu1 + p.chi2 * p.mu2);
    return std::exp(rate * t) * w0_maxnorm;
}

StableStepBounds stable_step_bounds(const ModelParams& p, double h, double g0, double horizon,
                                    double w0_maxnorm, double w0_front)
{
    StableStepBounds s;
    const double h2 = h * h;
    // nu (not mu) multiplies C: the bound comes from the (tau/h^2)(nu/g0) w term
    const double C = std::exp(p.a * horizon) * w0_front;
    s.front_branch = branch(h2, p.nu * C / g0 + h2 * (p.b * C - p.a));

    s.envelope_level = envelope_level(p, w0_maxnorm);
    const double grown = growth_envelope(p, s.envelope_level, horizon, w0_maxnorm);
    s.positivity_branch =
        branch(h2, 2.0 / g0 + h2 * ((2.0 * p.chi2 * p.mu2 + p.b) * grown - p.a));

    s.diffusion_cap = 0.5 * g0 * h2;
    return s;
}

double max_stable_timestep(const ModelParams& p, double h, double g0, double horizon,
                           double w0_maxnorm, double w0_front)
{
    return stable_step_bounds(p, h, g0, horizon, w0_maxnorm, w0_front).value();
}

}  // namespace chemofront
