#include "chemofront/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "chemofront/elliptic.hpp"

namespace chemofront {

GridSpec::GridSpec(int cells, double tau, double horizon)
    : cells_(cells), tau_(tau), horizon_(horizon)
{
    if (cells < min_cells)
        throw std::invalid_argument("GridSpec: need at least " + std::to_string(min_cells) +
                                    " cells, got " + std::to_string(cells));
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("GridSpec: tau must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("GridSpec: horizon must be positive");
}

std::vector<double> GridSpec::nodes() const
{
    std::vector<double> z(static_cast<std::size_t>(cells_) + 1);
    for (int j = 0; j <= cells_; ++j)
        z[static_cast<std::size_t>(j)] = node(j);
    return z;
}

std::int64_t GridSpec::step_count() const
{
    // tolerate round-off when horizon is an exact multiple of tau
    const double n = horizon_ / tau_;
    const double nearest = std::round(n);
    if (std::abs(n - nearest) <= 1e-9 * std::max(1.0, n))
        return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(n));
}

GridSpec build_grid(int cells, double tau, double horizon)
{
    return GridSpec(cells, tau, horizon);
}

double SimState::front() const
{
    return std::sqrt(g);
}

double SimState::sup_norm() const
{
    double m = 0.0;
    for (double x : w)
        m = std::max(m, std::abs(x));
    return m;
}

void refresh_chemicals(SimState& s, const ModelParams& p, const GridSpec& grid)
{
    const auto n = static_cast<std::size_t>(grid.cells()) + 1;
    s.v1.resize(n);
    s.v2.resize(n);
    std::vector<double> scratch;
    TridiagonalSystem sys;
    assemble_chemical_into(p.lambda1, p.mu1, s.g, s.w, sys);
    solve_tridiagonal_into(sys, s.v1, scratch);
    assemble_chemical_into(p.lambda2, p.mu2, s.g, s.w, sys);
    solve_tridiagonal_into(sys, s.v2, scratch);
}

SimState sample_initial(const ModelParams& p, const GridSpec& grid)
{
    p.validate();
    SimState s;
    s.g = p.h0 * p.h0;
    const int M = grid.cells();
    s.w.resize(static_cast<std::size_t>(M) + 1);
    for (int j = 0; j < M; ++j)
        s.w[static_cast<std::size_t>(j)] = p.sigma * std::cos(0.5 * std::numbers::pi * grid.node(j));
    s.w[static_cast<std::size_t>(M)] = 0.0;
    refresh_chemicals(s, p, grid);
    return s;
}

SimState sample_initial(const ModelParams& p, const GridSpec& grid,
                        const std::function<double(double)>& u0)
{
    p.validate();
    const double end = u0(p.h0);
    if (!(std::abs(end) <= 1e-12))
        throw std::invalid_argument("initial density must vanish at x = h0");
    SimState s;
    s.g = p.h0 * p.h0;
    const int M = grid.cells();
    s.w.resize(static_cast<std::size_t>(M) + 1);
    for (int j = 0; j < M; ++j) {
        const double v = u0(grid.node(j) * p.h0);
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("initial density must be finite and non-negative");
        s.w[static_cast<std::size_t>(j)] = v;
    }
    s.w[static_cast<std::size_t>(M)] = 0.0;
    refresh_chemicals(s, p, grid);
    return s;
}

std::vector<double> physical_coordinates(const SimState& s, const GridSpec& grid)
{
    const double front = s.front();
    std::vector<double> x(static_cast<std::size_t>(grid.cells()) + 1);
    for (int j = 0; j <= grid.cells(); ++j)
        x[static_cast<std::size_t>(j)] = grid.node(j) * front;
    return x;
}

}  // namespace chemofront
