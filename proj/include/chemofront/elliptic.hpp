#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace chemofront {

class GridSpec;

/// Row i reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i];
/// lower[0] and upper[n-1] are ignored.
struct TridiagonalSystem
{
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;

    std::size_t size() const { return diag.size(); }
    void resize(std::size_t n);

    /// |diag| >= |lower| + |upper| on every row, strictly on at least one.
    bool diagonally_dominant() const;

    /// (A x)_i for residual checks.
    std::vector<double> apply(std::span<const double> x) const;
};

class SingularSystemError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Discretized  V_zz / g - lambda V + mu w = 0  with V_z = 0 at both ends.
/// Interior rows are central differences; the end rows are half-cell
/// (finite-volume) balances. Rows are stored with positive diagonal.
TridiagonalSystem assemble_chemical(double lambda, double mu, double g, std::span<const double> w,
                                    const GridSpec& grid);
void assemble_chemical_into(double lambda, double mu, double g, std::span<const double> w,
                            TridiagonalSystem& sys);

/// Thomas algorithm. Throws SingularSystemError on a vanishing pivot.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys);
void solve_tridiagonal_into(const TridiagonalSystem& sys, std::span<double> x,
                            std::vector<double>& scratch);

/// Dense Gaussian elimination with partial pivoting; test oracle.
std::vector<double> solve_dense_oracle(const TridiagonalSystem& sys);

struct MaxPrincipleReport
{
    bool ok = true;
    std::size_t worst_index = 0;
    double worst_excess = 0.0;  ///< largest distance outside [mu/lambda min w, mu/lambda max w]
    double lower_bound = 0.0;
    double upper_bound = 0.0;
};

/// Checks (mu/lambda) min w - tol <= V_j <= (mu/lambda) max w + tol,
/// tol = 1e-9 (1 + ||w||_inf).
MaxPrincipleReport check_max_principle(std::span<const double> v, std::span<const double> w,
                                       double lambda, double mu);

}  // namespace chemofront
