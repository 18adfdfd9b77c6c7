#include "chemofront/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chemofront/grid.hpp"

namespace chemofront {

void TridiagonalSystem::resize(std::size_t n)
{
    lower.assign(n, 0.0);
    diag.assign(n, 0.0);
    upper.assign(n, 0.0);
    rhs.assign(n, 0.0);
}

bool TridiagonalSystem::diagonally_dominant() const
{
    const std::size_t n = size();
    bool strict = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::abs(lower[i]) : 0.0) + (i + 1 < n ? std::abs(upper[i]) : 0.0);
        const double d = std::abs(diag[i]);
        if (d < off)
            return false;
        strict = strict || d > off;
    }
    return strict;
}

std::vector<double> TridiagonalSystem::apply(std::span<const double> x) const
{
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0)
            s += lower[i] * x[i - 1];
        if (i + 1 < n)
            s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

void assemble_chemical_into(double lambda, double mu, double g, std::span<const double> w,
                            TridiagonalSystem& sys)
{
    if (w.size() < 3)
        throw std::invalid_argument("assemble_chemical: need at least 3 nodes");
    const std::size_t M = w.size() - 1;
    const double h = 1.0 / static_cast<double>(M);
    if (sys.size() != M + 1)
        sys.resize(M + 1);

    const double inner = 1.0 / (g * h * h);
    for (std::size_t j = 1; j < M; ++j) {
        sys.lower[j] = -inner;
        sys.diag[j] = 2.0 * inner + lambda;
        sys.upper[j] = -inner;
        sys.rhs[j] = mu * w[j];
    }

    // half cells [z_0, z_1/2] and [z_{M-1/2}, z_M]; cell averages of w taken at the node
    const double flux = 1.0 / (g * h);
    sys.lower[0] = 0.0;
    sys.diag[0] = flux + 0.5 * h * lambda;
    sys.upper[0] = -flux;
    sys.rhs[0] = 0.5 * h * mu * w[0];

    sys.lower[M] = -flux;
    sys.diag[M] = flux + 0.5 * h * lambda;
    sys.upper[M] = 0.0;
    sys.rhs[M] = 0.5 * h * mu * w[M];
}

TridiagonalSystem assemble_chemical(double lambda, double mu, double g, std::span<const double> w,
                                    const GridSpec& grid)
{
    if (w.size() != static_cast<std::size_t>(grid.cells()) + 1)
        throw std::invalid_argument("assemble_chemical: density has " + std::to_string(w.size()) +
                                    " entries, grid expects " + std::to_string(grid.cells() + 1));
    TridiagonalSystem sys;
    assemble_chemical_into(lambda, mu, g, w, sys);
    return sys;
}

void solve_tridiagonal_into(const TridiagonalSystem& sys, std::span<double> x,
                            std::vector<double>& scratch)
{
    const std::size_t n = sys.size();
    if (x.size() != n || sys.lower.size() != n || sys.upper.size() != n || sys.rhs.size() != n)
        throw std::invalid_argument("solve_tridiagonal: dimension mismatch");
    if (n == 0)
        return;
    scratch.resize(n);

    auto pivot_check = [&](std::size_t i, double pivot) {
        const double scale = std::max({std::abs(sys.lower[i]), std::abs(sys.diag[i]), std::abs(sys.upper[i])});
        if (!(std::abs(pivot) >= 1e-14 * scale) || scale == 0.0)
            throw SingularSystemError("solve_tridiagonal: vanishing pivot at row " + std::to_string(i));
    };

    // forward sweep; scratch holds the modified super-diagonal
    pivot_check(0, sys.diag[0]);
    scratch[0] = sys.upper[0] / sys.diag[0];
    x[0] = sys.rhs[0] / sys.diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double pivot = sys.diag[i] - sys.lower[i] * scratch[i - 1];
        pivot_check(i, pivot);
        scratch[i] = sys.upper[i] / pivot;
        x[i] = (sys.rhs[i] - sys.lower[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i > 0; --i)
        x[i - 1] -= scratch[i - 1] * x[i];
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys)
{
    std::vector<double> x(sys.size());
    std::vector<double> scratch;
    solve_tridiagonal_into(sys, x, scratch);
    return x;
}

std::vector<double> solve_dense_oracle(const TridiagonalSystem& sys)
{
    const std::size_t n = sys.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0)
            A[i][i - 1] = sys.lower[i];
        A[i][i] = sys.diag[i];
        if (i + 1 < n)
            A[i][i + 1] = sys.upper[i];
        A[i][n] = sys.rhs[i];
    }
    double norm = 0.0;
    for (const auto& row : A)
        for (std::size_t k = 0; k < n; ++k)
            norm = std::max(norm, std::abs(row[k]));

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[p][k]))
                p = i;
        if (!(std::abs(A[p][k]) > 1e-14 * norm))
            throw SingularSystemError("solve_dense_oracle: singular at column " + std::to_string(k));
        std::swap(A[k], A[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A[i][k] / A[k][k];
            if (f == 0.0)
                continue;
            for (std::size_t c = k; c <= n; ++c)
                A[i][c] -= f * A[k][c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = A[i][n];
        for (std::size_t c = i + 1; c < n; ++c)
            s -= A[i][c] * x[c];
        x[i] = s / A[i][i];
    }
    return x;
}

MaxPrincipleReport check_max_principle(std::span<const double> v, std::span<const double> w,
                                       double lambda, double mu)
{
    if (v.size() != w.size() || w.empty())
        throw std::invalid_argument("check_max_principle: arrays must be non-empty and equal length");
    const auto [lo_it, hi_it] = std::minmax_element(w.begin(), w.end());
    const double ratio = mu / lambda;
    double wnorm = 0.0;
    for (double x : w)
        wnorm = std::max(wnorm, std::abs(x));
    const double tol = 1e-9 * (1.0 + wnorm);

    MaxPrincipleReport r;
    r.lower_bound = ratio * *lo_it;
    r.upper_bound = ratio * *hi_it;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < v.size(); ++j) {
        double excess = std::max(r.lower_bound - v[j], v[j] - r.upper_bound);
        if (!std::isfinite(v[j]))
            excess = std::numeric_limits<double>::infinity();
        if (excess > worst) {
            worst = excess;
            r.worst_index = j;
        }
    }
    r.worst_excess = std::max(worst, 0.0);
    r.ok = r.worst_excess <= tol;
    return r;
}

}  // namespace chemofront
