#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chemofront/config.hpp"
#include "chemofront/model.hpp"

namespace chemofront {

struct ConvergenceLevel
{
    int cells = 0;
    double tau = 0.0;
    std::int64_t steps = 0;
    double final_h = 0.0;
    std::vector<double> w;
};

struct ConvergenceReport
{
    double horizon = 0.0;
    std::vector<ConvergenceLevel> levels;
    /// max over shared nodes of |w_k(T) - w_{k+1}(T)|, one per adjacent pair
    std::vector<double> differences;
    std::vector<double> front_differences;
    /// log2(differences[k] / differences[k+1])
    std::vector<double> orders;
};

/// Largest |coarse_j - fine_{s j}| where s = (fine.size()-1)/(coarse.size()-1)
/// must be a positive integer; equal sizes compare node by node.
double max_shared_difference(std::span<const double> coarse, std::span<const double> fine);

/// Levels M, 2M, 4M, ... with tau / 4^k, so every level takes an exact
/// integer number of steps to the horizon. tau is first shrunk so the
/// coarse level does as well.
ConvergenceReport convergence_study(const ModelParams& p, int cells, double tau, double horizon,
                                    int refinements, bool allow_unstable_step = true);
ConvergenceReport convergence_study(const RunConfig& base, int refinements);

}  // namespace chemofront
