#include "chemofront/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace chemofront {

const char* to_string(OutcomeKind kind)
{
    switch (kind) {
    case OutcomeKind::Spreading:
        return "spreading";
    case OutcomeKind::Vanishing:
        return "vanishing";
    case OutcomeKind::Undecided:
        break;
    }
    return "undecided";
}

const char* to_string(BisectParameter which)
{
    return which == BisectParameter::Nu ? "nu" : "sigma";
}

double spreading_speed_at(const Trajectory& traj, double t, double window)
{
    if (!(window > 0.0))
        throw std::invalid_argument("speed window must be positive");
    if (traj.samples.size() < 2 || t > traj.final_time() + 1e-12 || t <= 0.0)
        throw InsufficientData("no samples cover t = " + std::to_string(t));
    const double start = std::max(0.0, t - window);
    return (traj.front_at(t) - traj.front_at(start)) / (t - start);
}

double spreading_speed(const Trajectory& traj, double window)
{
    if (traj.samples.size() < 2 || traj.final_time() < window)
        throw InsufficientData("trajectory shorter than the speed window");
    return spreading_speed_at(traj, traj.final_time(), window);
}

Outcome classify(const Trajectory& traj, const ClassifyThresholds& th)
{
    Outcome out;
    out.critical_length = critical_length(traj.params.a);
    if (traj.samples.empty()) {
        out.evidence = "empty trajectory";
        return out;
    }
    const auto& last = traj.samples.back();
    out.final_h = last.h;
    out.final_sup_w = last.sup_w;

    const double T = last.t;
    const double start = std::max(0.0, T - th.window);
    double front_rate = 0.0;
    if (T > start) {
        out.speed = (last.h - traj.front_at(start)) / (T - start);
        const double h_start = traj.front_at(start);
        front_rate = (last.h * last.h - h_start * h_start) / (T - start);
    }

    std::ostringstream ev;
    ev << "T=" << T << " h=" << out.final_h << " l*=" << out.critical_length
       << " sup_w=" << out.final_sup_w << " speed=" << out.speed.value_or(0.0)
       << " g_rate=" << front_rate;

    const bool wide = out.final_h > th.spread_factor * out.critical_length;
    const bool moving = out.speed && *out.speed > th.spread_speed;
    const bool extinct = out.final_sup_w < th.vanish_sup;
    const bool stalled = front_rate < th.vanish_front_rate;
    if (wide && moving)
        out.kind = OutcomeKind::Spreading;
    else if (extinct && stalled)
        out.kind = OutcomeKind::Vanishing;
    if (out.kind == OutcomeKind::Vanishing && out.final_h > out.critical_length)
        ev << " (final h exceeds l*)";
    out.evidence = ev.str();
    return out;
}

namespace {

TrialSetup normalized(TrialSetup setup)
{
    if (setup.policy == StepPolicy::DiffusionLimited)
        setup.run.allow_unstable_step = true;
    return setup;
}

Trajectory trial_run(const ModelParams& p, const TrialSetup& setup, double horizon)
{
    const double tau = choose_timestep(p, setup.cells, horizon, setup.policy);
    return run(p, build_grid(setup.cells, tau, horizon), setup.run);
}

}  // namespace

BisectionStep classify_trial(const ModelParams& p, const TrialSetup& raw)
{
    const TrialSetup setup = normalized(raw);
    BisectionStep st;
    auto tally = [&st](const RunDiagnostics& d) {
        st.elliptic_solves += d.elliptic_solves;
        st.max_principle_failures += d.max_principle_failures;
        st.max_principle_worst_excess = std::max(st.max_principle_worst_excess, d.max_principle_worst_excess);
    };
    Trajectory traj = trial_run(p, setup, setup.horizon);
    tally(traj.diagnostics);
    Outcome out = classify(traj, setup.thresholds);
    if (out.kind == OutcomeKind::Undecided) {
        st.horizon_extended = true;
        traj = trial_run(p, setup, 2.0 * setup.horizon);
        tally(traj.diagnostics);
        out = classify(traj, setup.thresholds);
    }
    st.kind = out.kind;
    st.evidence = out.evidence;
    if (out.kind == OutcomeKind::Undecided) {
        const double T = traj.final_time();
        const double earlier = T - setup.thresholds.window;
        double sup_before = traj.samples.front().sup_w;
        for (const auto& s : traj.samples)
            if (s.t <= earlier)
                sup_before = s.sup_w;
        if (out.final_h > out.critical_length) {
            st.kind = OutcomeKind::Spreading;
            st.evidence += " [trend: h beyond l*]";
        } else if (out.final_sup_w < sup_before) {
            st.kind = OutcomeKind::Vanishing;
            st.evidence += " [trend: density decaying]";
        } else {
            st.kind = OutcomeKind::Spreading;
            st.evidence += " [trend: density growing]";
        }
    }
    return st;
}

BisectionResult bisect_critical(BisectParameter which, double lo, double hi, double tol,
                                const ModelParams& base, const TrialSetup& setup, int max_iterations)
{
    if (!(tol > 0.0))
        throw std::invalid_argument("bisection tolerance must be positive");
    if (lo > hi)
        throw BracketError("bisection bracket is reversed");

    BisectionResult r;
    r.parameter = which;
    r.lower = lo;
    r.upper = hi;
    if (lo == hi)
        return r;

    const std::string name = to_string(which);
    auto trial = [&](double value) {
        ModelParams p = base;
        set_parameter(p, name, value);
        BisectionStep st = classify_trial(p, setup);
        st.value = value;
        r.history.push_back(st);
        ++r.simulations;
        return st.kind;
    };

    if (trial(lo) != OutcomeKind::Vanishing)
        throw BracketError(name + " = " + std::to_string(lo) + " does not vanish");
    if (trial(hi) != OutcomeKind::Spreading)
        throw BracketError(name + " = " + std::to_string(hi) + " does not spread");

    while (r.upper - r.lower > tol) {
        if (r.iterations >= max_iterations)
            throw std::runtime_error("bisection budget of " + std::to_string(max_iterations) +
                                     " iterations exceeded");
        const double mid = 0.5 * (r.lower + r.upper);
        if (trial(mid) == OutcomeKind::Spreading)
            r.upper = mid;
        else
            r.lower = mid;
        ++r.iterations;
    }
    return r;
}

namespace {

double* field(ModelParams& p, const std::string& name)
{
    if (name == "a") return &p.a;
    if (name == "b") return &p.b;
    if (name == "chi1") return &p.chi1;
    if (name == "chi2") return &p.chi2;
    if (name == "lambda1") return &p.lambda1;
    if (name == "lambda2") return &p.lambda2;
    if (name == "mu1") return &p.mu1;
    if (name == "mu2") return &p.mu2;
    if (name == "nu") return &p.nu;
    if (name == "sigma") return &p.sigma;
    if (name == "h0") return &p.h0;
    return nullptr;
}

}  // namespace

bool is_parameter_name(const std::string& name)
{
    ModelParams p;
    return field(p, name) != nullptr;
}

void set_parameter(ModelParams& p, const std::string& name, double value)
{
    double* f = field(p, name);
    if (!f)
        throw std::invalid_argument("unknown model parameter '" + name + "'");
    *f = value;
}

double get_parameter(const ModelParams& p, const std::string& name)
{
    ModelParams copy = p;
    const double* f = field(copy, name);
    if (!f)
        throw std::invalid_argument("unknown model parameter '" + name + "'");
    return *f;
}

SpeedTable sweep(const ModelParams& base, const std::string& axis, const std::vector<double>& values,
                 const std::vector<double>& report_times, const TrialSetup& raw, double window)
{
    if (values.empty())
        throw std::invalid_argument("sweep needs at least one value");
    if (report_times.empty())
        throw std::invalid_argument("sweep needs at least one report time");
    if (!is_parameter_name(axis))
        throw std::invalid_argument("unknown sweep axis '" + axis + "'");
    const TrialSetup setup = normalized(raw);
    const double horizon = std::max(setup.horizon, *std::max_element(report_times.begin(), report_times.end()));

    struct Column
    {
        std::vector<std::optional<double>> speeds;
        std::string error;
        RunDiagnostics diagnostics;
    };
    auto column = [&](double value) {
        Column c;
        c.speeds.assign(report_times.size(), std::nullopt);
        try {
            ModelParams p = base;
            set_parameter(p, axis, value);
            const Trajectory traj = trial_run(p, setup, horizon);
            c.diagnostics = traj.diagnostics;
            for (std::size_t i = 0; i < report_times.size(); ++i)
                c.speeds[i] = spreading_speed_at(traj, report_times[i], window);
        } catch (const std::exception& e) {
            c.error = e.what();
        }
        return c;
    };

    std::vector<std::future<Column>> pending;
    pending.reserve(values.size());
    for (double v : values)
        pending.push_back(std::async(std::launch::async, column, v));

    SpeedTable table;
    table.axis = axis;
    table.values = values;
    table.report_times = report_times;
    table.cells.assign(report_times.size(), std::vector<std::optional<double>>(values.size()));
    table.errors.resize(values.size());
    table.diagnostics.resize(values.size());
    for (std::size_t c = 0; c < values.size(); ++c) {
        Column col = pending[c].get();
        for (std::size_t r = 0; r < report_times.size(); ++r)
            table.cells[r][c] = col.speeds[r];
        table.errors[c] = col.error;
        table.diagnostics[c] = col.diagnostics;
    }
    return table;
}

}  // namespace chemofront
