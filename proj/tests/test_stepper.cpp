#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "chemofront/stepper.hpp"
#include "doctest.h"

using namespace chemofront;

namespace {

ModelParams speed_table_params()
{
    ModelParams p;
    p.h0 = 2.0;
    p.chi1 = 0.2;
    p.chi2 = 0.1;
    p.nu = 0.8;
    p.lambda1 = 1.0;
    p.lambda2 = 2.0;
    p.mu1 = 1.0;
    p.mu2 = 2.0;
    return p;
}

/// Front-fixed Fisher-KPP update written from the undivided difference
/// equation, independent of the stencil-coefficient form.
void fisher_kpp_step(std::vector<double>& w, double& g, double a, double b, double nu, double tau)
{
    const std::size_t M = w.size() - 1;
    const double h = 1.0 / static_cast<double>(M);
    const double g_next = g + tau * nu / h * (4.0 * w[M - 1] - w[M - 2]);
    std::vector<double> out(M + 1, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        const double z = static_cast<double>(j) * h;
        const double wl = j == 0 ? w[1] : w[j - 1];
        const double wz = (w[j + 1] - wl) / (2.0 * h);
        const double lap = (wl - 2.0 * w[j] + w[j + 1]) / (h * h);
        const double rhs = lap + a * w[j] * g - b * w[j] * w[j] * g + 0.5 * z * wz * (g_next - g) / tau;
        out[j] = w[j] + tau / g * rhs;
    }
    w = out;
    g = g_next;
}

}  // namespace

TEST_CASE("chemo terms")
{
    std::vector<double> v1 = {1.0, 2.0, 4.0, 7.0};
    std::vector<double> v2 = {0.5, 0.5, 0.5, 0.5};
    ModelParams fisher;
    auto t = chemo_terms(1, v1, v2, fisher);
    CHECK(t.drift == 0.0);
    CHECK(t.linear == fisher.a);
    CHECK(t.quadratic == -fisher.b);

    ModelParams p;
    p.chi1 = 0.2;
    p.chi2 = 0.1;
    p.mu1 = 1.0;
    p.mu2 = 2.0;
    p.lambda1 = 1.5;
    p.lambda2 = 3.0;
    CHECK(chemo_terms(2, v1, v2, p).quadratic == doctest::Approx(-1.0));
    CHECK(chemo_terms(2, v1, v2, p).drift == doctest::Approx(-0.2 * 5.0));
    CHECK(chemo_terms(2, v1, v2, p).linear == doctest::Approx(-0.2 * 1.5 * 4.0 + 0.1 * 3.0 * 0.5 + 2.0));

    std::vector<double> flat(4, 3.0);
    CHECK(chemo_terms(1, flat, flat, p).drift == 0.0);
    // reflection at z = 0
    CHECK(chemo_terms(0, v1, v1, p).drift == 0.0);
}

TEST_CASE("Stefan increment")
{
    ModelParams p;
    p.nu = 0.8;
    auto grid = build_grid(100, 0.001, 1.0);
    SimState s;
    s.g = 1.0;
    s.w.assign(101, 0.0);
    CHECK(stefan_increment(s, p, grid) == 0.0);
    s.w[99] = 0.05;
    s.w[98] = 0.099;
    CHECK(stefan_increment(s, p, grid) == doctest::Approx(0.00808).epsilon(1e-12));

    // smooth profile vanishing at z = 1: increment ~ 2 (tau nu / h) w_{M-1}
    for (int M : {50, 100, 200, 400}) {
        auto gr = build_grid(M, 0.001, 1.0);
        ModelParams q;
        q.h0 = 1.0;
        auto st = sample_initial(q, gr);
        const double scale = gr.tau() * q.nu / gr.width();
        const double dg = stefan_increment(st, q, gr);
        const double w1 = st.w[M - 1];
        CHECK(std::abs(dg / scale - 2.0 * w1) <= 2.0 * gr.width() * gr.width());
    }
}

TEST_CASE("zero density is a fixed point")
{
    ModelParams p = speed_table_params();
    p.sigma = 0.0;
    auto grid = build_grid(16, 1e-3, 1.0);
    auto s = sample_initial(p, grid);
    auto d = step(s, p, grid);
    for (double x : s.w)
        CHECK(x == 0.0);
    CHECK(s.g == 4.0);
    CHECK(d.front_increment == 0.0);
    CHECK(s.step == 1);
}

TEST_CASE("Fisher-KPP single step against the independent update")
{
    ModelParams p;
    p.h0 = 1.5;
    p.nu = 0.8;
    const int M = 8;
    auto grid = build_grid(M, 0.9 * 0.5 * p.h0 * p.h0 / (M * M), 1.0);
    auto s = sample_initial(p, grid);
    std::vector<double> w = s.w;
    double g = s.g;
    step(s, p, grid);
    fisher_kpp_step(w, g, p.a, p.b, p.nu, grid.tau());
    for (int j = 0; j <= M; ++j)
        CHECK(std::abs(s.w[j] - w[j]) <= 1e-14);
    CHECK(std::abs(s.g - g) <= 1e-14);
}

TEST_CASE("full chemotaxis single step against frozen oracle values")
{
    // tests/oracles/derived_values.py: undivided scheme, M = 8, g = 4
    ModelParams p = speed_table_params();
    auto grid = build_grid(8, 0.028125, 1.0);
    auto s = sample_initial(p, grid);
    step(s, p, grid);
    const double expected[] = {1.0111845486890447, 0.9919102779771203, 0.9347284135312818,
                               0.8415535574440908, 0.7155468380823112, 0.5610631866416718,
                               0.3835634521055379, 0.18948109283781875, 0.0};
    for (int j = 0; j <= 8; ++j)
        CHECK(std::abs(s.w[j] - expected[j]) <= 1e-13);
    CHECK(s.g == doctest::Approx(4.071582014025896).epsilon(1e-14));
}

TEST_CASE("Fisher-KPP pipeline matches the independent update over 100 steps")
{
    ModelParams p;
    p.h0 = 2.0;
    p.nu = 0.8;
    p.sigma = 1.0;
    const int M = 50;
    const double tau = choose_timestep(p, M, 1.0, StepPolicy::DiffusionLimited);
    auto grid = build_grid(M, tau, 100 * tau);
    RunOptions opt;
    opt.allow_unstable_step = true;
    auto traj = run(p, grid, opt);

    auto ref = sample_initial(p, grid);
    std::vector<double> w = ref.w;
    double g = ref.g;
    for (int n = 0; n < 100; ++n)
        fisher_kpp_step(w, g, p.a, p.b, p.nu, tau);
    REQUIRE(traj.final_state.step == 100);
    double diff = 0.0;
    for (int j = 0; j <= M; ++j)
        diff = std::max(diff, std::abs(traj.final_state.w[j] - w[j]));
    CHECK(diff <= 1e-12);
    CHECK(std::abs(traj.final_state.g - g) <= 1e-12);
}

TEST_CASE("run with zero density keeps the front fixed")
{
    ModelParams p;
    p.sigma = 0.0;
    p.h0 = 1.3;
    auto grid = build_grid(20, choose_timestep(p, 20, 0.5, StepPolicy::Stable), 0.5);
    auto traj = run(p, grid);
    CHECK(traj.final_state.front() == 1.3);
    CHECK(traj.samples.back().h == 1.3);
    CHECK(traj.samples.back().sup_w == 0.0);
}

TEST_CASE("run refuses an unstable step unless overridden")
{
    ModelParams p = speed_table_params();
    auto grid = build_grid(20, choose_timestep(p, 20, 1.0, StepPolicy::DiffusionLimited), 1.0);
    CHECK_THROWS_AS(run(p, grid), std::invalid_argument);
    RunOptions opt;
    opt.allow_unstable_step = true;
    auto traj = run(p, grid, opt);
    CHECK(traj.diagnostics.step_exceeds_bound);
    CHECK(traj.diagnostics.front_monotone);
    CHECK_FALSE(traj.diagnostics.first_negative_step.has_value());
}

TEST_CASE("non-finite values abort with the step index")
{
    ModelParams p;
    auto grid = build_grid(8, 1e-3, 1.0);
    auto s = sample_initial(p, grid);
    s.w[3] = std::numeric_limits<double>::quiet_NaN();
    try {
        step(s, p, grid);
        FAIL("expected NumericalAbort");
    } catch (const NumericalAbort& e) {
        CHECK(e.step() == 1);
    }
}

TEST_CASE("samples, windowed slope, and snapshots")
{
    ModelParams p = speed_table_params();
    const int M = 40;
    const double tau = choose_timestep(p, M, 2.0, StepPolicy::DiffusionLimited);
    auto grid = build_grid(M, tau, 2.0);
    RunOptions opt;
    opt.allow_unstable_step = true;
    opt.snapshot_times = {0.0, 1.0, 5.0};
    auto traj = run(p, grid, opt);

    REQUIRE(traj.samples.size() > 150);
    CHECK(traj.samples.front().t == 0.0);
    CHECK(traj.samples.front().h == 2.0);
    CHECK(traj.samples.back().t >= 2.0);
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        CHECK(traj.samples[i].h >= traj.samples[i - 1].h);

    const auto& last = traj.samples.back();
    const double slope = (last.h - traj.front_at(last.t - 1.0)) / 1.0;
    CHECK(last.dh_dt == doctest::Approx(slope).epsilon(1e-12));
    CHECK(last.h_over_t == doctest::Approx(last.h / last.t));

    REQUIRE(traj.snapshots.size() == 2);
    CHECK(traj.snapshots[0].t == 0.0);
    CHECK(std::abs(traj.snapshots[1].t - 1.0) <= tau);
    CHECK(traj.snapshots[0].x.back() == 2.0);
}

TEST_CASE("property: positivity, envelope, and monotone front under the stable step")
{
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int draw = 0; draw < 25; ++draw) {
        ModelParams p;
        p.a = 0.5 + 2.0 * u(rng);
        p.b = 0.5 + 2.0 * u(rng);
        p.chi1 = 0.3 * u(rng);
        p.chi2 = 0.3 * u(rng);
        p.lambda1 = 0.5 + 2.0 * u(rng);
        p.lambda2 = 0.5 + 2.0 * u(rng);
        p.mu1 = 0.5 + 1.5 * u(rng);
        p.mu2 = 0.5 + 1.5 * u(rng);
        p.nu = 0.01 + 2.0 * u(rng);
        p.sigma = 0.01 + 4.0 * u(rng);
        p.h0 = 0.5 + 2.5 * u(rng);
        const int M = 16;
        const double T = 0.05;
        auto grid = build_grid(M, choose_timestep(p, M, T, StepPolicy::Stable), T);
        auto traj = run(p, grid);
        CHECK_FALSE(traj.diagnostics.first_negative_step.has_value());
        CHECK(traj.diagnostics.front_monotone);
        CHECK(traj.diagnostics.envelope_ratio_max <= 1.0);
        CHECK(traj.diagnostics.max_principle_failures == 0);
    }
}
