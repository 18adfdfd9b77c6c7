#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "chemofront/model.hpp"

namespace chemofront {

/// Uniform grid on the fixed interval z in [0, 1] plus the time step.
/// The mesh width is always derived from the cell count.
class GridSpec
{
  public:
    static constexpr int min_cells = 8;

    GridSpec(int cells, double tau, double horizon);

    int cells() const { return cells_; }
    double width() const { return 1.0 / cells_; }
    double tau() const { return tau_; }
    double horizon() const { return horizon_; }

    /// z_j = j / M, exact at both ends.
    double node(int j) const { return static_cast<double>(j) / cells_; }
    std::vector<double> nodes() const;

    /// Number of steps needed to reach the horizon.
    std::int64_t step_count() const;

    GridSpec with_tau(double tau) const { return {cells_, tau, horizon_}; }
    GridSpec with_horizon(double horizon) const { return {cells_, tau_, horizon}; }

    bool operator==(const GridSpec&) const = default;

  private:
    int cells_;
    double tau_;
    double horizon_;
};

GridSpec build_grid(int cells, double tau, double horizon);

/// Solver state in front-fixed coordinates.
struct SimState
{
    double g = 0.0;          ///< squared front position h(t)^2
    std::vector<double> w;   ///< density at z_0..z_M, w[M] == 0
    std::vector<double> v1;  ///< attractant
    std::vector<double> v2;  ///< repellent
    std::int64_t step = 0;
    double t = 0.0;

    double front() const;
    double sup_norm() const;
};

/// Cosine family w_j = sigma cos(pi z_j / 2); chemicals solved from it.
SimState sample_initial(const ModelParams& p, const GridSpec& grid);

/// Any initial density u0 on [0, h0] with u0'(0) = 0, u0(h0) = 0 and u0 >= 0.
/// Throws std::invalid_argument if u0 is negative or non-zero at h0.
SimState sample_initial(const ModelParams& p, const GridSpec& grid,
                        const std::function<double(double)>& u0);

/// x_j = z_j sqrt(g); the last entry is the front.
std::vector<double> physical_coordinates(const SimState& s, const GridSpec& grid);

/// Re-solve both chemical fields for the current (w, g).
void refresh_chemicals(SimState& s, const ModelParams& p, const GridSpec& grid);

}  // namespace chemofront
