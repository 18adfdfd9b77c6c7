#include "chemofront/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "chemofront/stepper.hpp"

namespace chemofront {

double max_shared_difference(std::span<const double> coarse, std::span<const double> fine)
{
    if (coarse.size() < 2 || fine.size() < coarse.size())
        throw std::invalid_argument("fine profile must have at least as many nodes as the coarse one");
    const std::size_t stride = (fine.size() - 1) / (coarse.size() - 1);
    if (stride * (coarse.size() - 1) != fine.size() - 1)
        throw std::invalid_argument("grids do not nest: " + std::to_string(coarse.size()) + " and " +
                                    std::to_string(fine.size()) + " nodes");
    double worst = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j)
        worst = std::max(worst, std::abs(coarse[j] - fine[j * stride]));
    return worst;
}

ConvergenceReport convergence_study(const ModelParams& p, int cells, double tau, double horizon,
                                    int refinements, bool allow_unstable_step)
{
    if (refinements < 2)
        throw std::invalid_argument("convergence study needs at least 2 levels");
    if (!(tau > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("tau and horizon must be positive");

    const auto coarse_steps = static_cast<std::int64_t>(std::ceil(horizon / tau - 1e-9));
    ConvergenceReport report;
    report.horizon = horizon;

    RunOptions options;
    options.sample_every = horizon;
    options.allow_unstable_step = allow_unstable_step;

    for (int k = 0; k < refinements; ++k) {
        const int M = cells << k;
        const std::int64_t steps = coarse_steps << (2 * k);
        const double level_tau = horizon / static_cast<double>(steps);
        const Trajectory traj = run(p, build_grid(M, level_tau, horizon), options);
        ConvergenceLevel level;
        level.cells = M;
        level.tau = level_tau;
        level.steps = traj.diagnostics.steps;
        level.final_h = traj.final_state.front();
        level.w = traj.final_state.w;
        report.levels.push_back(std::move(level));
    }

    for (std::size_t k = 0; k + 1 < report.levels.size(); ++k) {
        const auto& c = report.levels[k];
        const auto& f = report.levels[k + 1];
        report.differences.push_back(max_shared_difference(c.w, f.w));
        report.front_differences.push_back(std::abs(c.final_h - f.final_h));
    }
    for (std::size_t k = 0; k + 1 < report.differences.size(); ++k) {
        const double a = report.differences[k];
        const double b = report.differences[k + 1];
        report.orders.push_back(a > 0.0 && b > 0.0 ? std::log2(a / b)
                                                   : std::numeric_limits<double>::quiet_NaN());
    }
    return report;
}

ConvergenceReport convergence_study(const RunConfig& base, int refinements)
{
    return convergence_study(base.params, base.cells, base.resolved_tau(), base.horizon, refinements,
                             base.run_options().allow_unstable_step);
}

}  // namespace chemofront
