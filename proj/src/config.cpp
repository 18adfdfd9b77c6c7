#include "chemofront/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

namespace chemofront {

const char* to_string(RunMode mode)
{
    switch (mode) {
    case RunMode::Simulate: return "simulate";
    case RunMode::Sweep: return "sweep";
    case RunMode::Bisect: return "bisect";
    case RunMode::Convergence: return "convergence";
    case RunMode::Preset: return "preset";
    }
    return "?";
}

std::optional<RunMode> parse_mode(const std::string& text)
{
    for (RunMode m : {RunMode::Simulate, RunMode::Sweep, RunMode::Bisect, RunMode::Convergence,
                      RunMode::Preset})
        if (text == to_string(m))
            return m;
    return std::nullopt;
}

ConfigParseError::ConfigParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
{
}

ConfigValidationError::ConfigValidationError(const std::string& key, const std::string& message)
    : std::invalid_argument(key + ": " + message), key_(key)
{
}

const std::vector<std::string>& required_model_keys()
{
    static const std::vector<std::string> keys{"a",       "b",       "chi1", "chi2",  "lambda1", "lambda2",
                                               "mu1",     "mu2",     "nu",   "sigma", "h0"};
    return keys;
}

namespace {

struct Entry
{
    std::string value;
    int line = 0;
};

// Keys owned by one mode; anything else is shared.
const std::map<std::string, RunMode>& mode_keys()
{
    static const std::map<std::string, RunMode> keys{
        {"axis", RunMode::Sweep},         {"values", RunMode::Sweep},
        {"report_times", RunMode::Sweep}, {"parameter", RunMode::Bisect},
        {"lower", RunMode::Bisect},       {"upper", RunMode::Bisect},
        {"tolerance", RunMode::Bisect},   {"max_iterations", RunMode::Bisect},
        {"refinements", RunMode::Convergence}, {"preset", RunMode::Preset},
    };
    return keys;
}

const std::set<std::string>& shared_keys()
{
    static const std::set<std::string> keys{
        "mode",         "cells",        "horizon",        "tau",        "policy",
        "allow_unstable_step", "sample_every", "speed_window", "snapshot_times", "output_dir",
    };
    return keys;
}

bool known_key(const std::string& key)
{
    const auto& model = required_model_keys();
    return std::find(model.begin(), model.end(), key) != model.end() || shared_keys().count(key) ||
           mode_keys().count(key);
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const Entry& e)
{
    double v = 0.0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    if (*begin == '+')
        ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigParseError(e.line, key + ": expected a number, got '" + e.value + "'");
    return v;
}

int to_int(const std::string& key, const Entry& e)
{
    int v = 0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigParseError(e.line, key + ": expected an integer, got '" + e.value + "'");
    return v;
}

bool to_bool(const std::string& key, const Entry& e)
{
    if (e.value == "true")
        return true;
    if (e.value == "false")
        return false;
    throw ConfigParseError(e.line, key + ": expected true or false, got '" + e.value + "'");
}

std::vector<double> to_list(const std::string& key, const Entry& e)
{
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Entry part{trim(item), e.line};
        if (part.value.empty())
            throw ConfigParseError(e.line, key + ": empty list element");
        out.push_back(to_double(key, part));
    }
    return out;
}

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_list(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        out += format_double(values[i]);
    }
    return out;
}

bool ascending_positive(const std::vector<double>& v)
{
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!(v[i] > 0.0) || (i && !(v[i] > v[i - 1])))
            return false;
    return true;
}

}  // namespace

double RunConfig::resolved_tau() const
{
    return tau ? *tau : choose_timestep(params, cells, horizon, policy);
}

GridSpec RunConfig::grid() const
{
    return build_grid(cells, resolved_tau(), horizon);
}

RunOptions RunConfig::run_options() const
{
    RunOptions o;
    o.sample_every = sample_every;
    o.snapshot_times = snapshot_times;
    o.speed_window = speed_window;
    o.allow_unstable_step =
        allow_unstable_step || (!tau && policy == StepPolicy::DiffusionLimited);
    return o;
}

TrialSetup RunConfig::trial_setup() const
{
    TrialSetup s;
    s.cells = cells;
    s.horizon = horizon;
    s.policy = policy;
    s.run = run_options();
    return s;
}

RunConfig parse_config(const std::string& text, RunMode default_mode)
{
    std::map<std::string, Entry> entries;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError(line, "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw ConfigParseError(line, "missing key before '='");
        if (!known_key(key))
            throw ConfigParseError(line, "unknown key '" + key + "'");
        if (value.empty())
            throw ConfigParseError(line, key + ": missing value");
        if (auto it = entries.find(key); it != entries.end())
            throw ConfigParseError(line, "duplicate key '" + key + "' (first set on line " +
                                             std::to_string(it->second.line) + ")");
        entries.emplace(key, Entry{value, line});
    }

    RunConfig c;
    c.mode = default_mode;
    if (auto it = entries.find("mode"); it != entries.end()) {
        auto m = parse_mode(it->second.value);
        if (!m)
            throw ConfigParseError(it->second.line, "mode: unknown mode '" + it->second.value + "'");
        c.mode = *m;
    }

    for (const auto& [key, e] : entries) {
        auto owner = mode_keys().find(key);
        if (owner != mode_keys().end() && owner->second != c.mode)
            throw ConfigValidationError(key, std::string("only valid in ") + to_string(owner->second) +
                                                 " mode (line " + std::to_string(e.line) + ")");
    }

    for (const auto& [key, e] : entries) {
        if (is_parameter_name(key))
            set_parameter(c.params, key, to_double(key, e));
        else if (key == "cells")
            c.cells = to_int(key, e);
        else if (key == "horizon")
            c.horizon = to_double(key, e);
        else if (key == "tau")
            c.tau = to_double(key, e);
        else if (key == "policy") {
            if (e.value == "diffusion_limited")
                c.policy = StepPolicy::DiffusionLimited;
            else if (e.value == "stable")
                c.policy = StepPolicy::Stable;
            else
                throw ConfigParseError(e.line, "policy: expected stable or diffusion_limited");
        } else if (key == "allow_unstable_step")
            c.allow_unstable_step = to_bool(key, e);
        else if (key == "sample_every")
            c.sample_every = to_double(key, e);
        else if (key == "speed_window")
            c.speed_window = to_double(key, e);
        else if (key == "snapshot_times")
            c.snapshot_times = to_list(key, e);
        else if (key == "output_dir")
            c.output_dir = e.value;
        else if (key == "axis")
            c.axis = e.value;
        else if (key == "values")
            c.values = to_list(key, e);
        else if (key == "report_times")
            c.report_times = to_list(key, e);
        else if (key == "parameter") {
            if (e.value == "nu")
                c.parameter = BisectParameter::Nu;
            else if (e.value == "sigma")
                c.parameter = BisectParameter::Sigma;
            else
                throw ConfigParseError(e.line, "parameter: expected nu or sigma");
        } else if (key == "lower")
            c.lower = to_double(key, e);
        else if (key == "upper")
            c.upper = to_double(key, e);
        else if (key == "tolerance")
            c.tolerance = to_double(key, e);
        else if (key == "max_iterations")
            c.max_iterations = to_int(key, e);
        else if (key == "refinements")
            c.refinements = to_int(key, e);
        else if (key == "preset")
            c.preset = e.value;
    }

    if (c.mode != RunMode::Preset) {
        std::string missing;
        for (const auto& key : required_model_keys())
            if (!entries.count(key))
                missing += (missing.empty() ? "" : ", ") + key;
        if (!missing.empty())
            throw ConfigValidationError(missing.substr(0, missing.find(',')),
                                        "missing required keys: " + missing);
    }

    validate(c);
    return c;
}

void validate(const RunConfig& c)
{
    auto fail = [](const std::string& key, const std::string& msg) {
        throw ConfigValidationError(key, msg);
    };

    if (c.mode != RunMode::Preset) {
        try {
            c.params.validate();
        } catch (const std::invalid_argument& e) {
            std::string what = e.what();
            const auto dot = what.find('.');
            const auto space = what.find(' ');
            std::string key = dot != std::string::npos && space > dot
                                  ? what.substr(dot + 1, space - dot - 1)
                                  : "params";
            fail(key, what);
        }
    }
    if (c.cells < GridSpec::min_cells)
        fail("cells", "must be >= " + std::to_string(GridSpec::min_cells));
    if (!(c.horizon > 0.0))
        fail("horizon", "must be > 0");
    if (c.tau && !(*c.tau > 0.0))
        fail("tau", "must be > 0");
    if (!(c.sample_every > 0.0))
        fail("sample_every", "must be > 0");
    if (!(c.speed_window > 0.0))
        fail("speed_window", "must be > 0");
    for (double t : c.snapshot_times)
        if (!(t >= 0.0 && t <= c.horizon))
            fail("snapshot_times", "times must lie in [0, horizon]");
    if (c.output_dir.empty())
        fail("output_dir", "must not be empty");

    if (c.mode != RunMode::Sweep && (!c.axis.empty() || !c.values.empty()))
        fail(c.axis.empty() ? "values" : "axis", "only valid in sweep mode");
    if (c.mode != RunMode::Bisect && (c.lower || c.upper))
        fail(c.lower ? "lower" : "upper", "only valid in bisect mode");
    if (c.mode != RunMode::Preset && !c.preset.empty())
        fail("preset", "only valid in preset mode");

    switch (c.mode) {
    case RunMode::Simulate: break;
    case RunMode::Sweep:
        if (!is_parameter_name(c.axis))
            fail("axis", c.axis.empty() ? "required in sweep mode" : "unknown parameter '" + c.axis + "'");
        if (c.values.empty())
            fail("values", "required in sweep mode");
        if (!ascending_positive(c.report_times))
            fail("report_times", "must be positive and strictly increasing");
        break;
    case RunMode::Bisect:
        if (!c.lower)
            fail("lower", "required in bisect mode");
        if (!c.upper)
            fail("upper", "required in bisect mode");
        if (!(*c.lower < *c.upper))
            fail("lower", "must be below upper");
        if (!(c.tolerance > 0.0))
            fail("tolerance", "must be > 0");
        if (c.max_iterations < 1)
            fail("max_iterations", "must be >= 1");
        break;
    case RunMode::Convergence:
        if (c.refinements < 2)
            fail("refinements", "must be >= 2");
        break;
    case RunMode::Preset:
        if (c.preset.empty())
            fail("preset", "required in preset mode");
        break;
    }
}

std::string render_config(const RunConfig& c)
{
    std::ostringstream out;
    auto put = [&](const std::string& key, const std::string& value) { out << key << " = " << value << '\n'; };

    put("mode", to_string(c.mode));
    if (c.mode == RunMode::Preset) {
        put("preset", c.preset);
    } else {
        for (const auto& key : required_model_keys())
            put(key, format_double(get_parameter(c.params, key)));
    }
    put("cells", std::to_string(c.cells));
    put("horizon", format_double(c.horizon));
    if (c.tau)
        put("tau", format_double(*c.tau));
    put("policy", c.policy == StepPolicy::Stable ? "stable" : "diffusion_limited");
    put("allow_unstable_step", c.allow_unstable_step ? "true" : "false");
    put("sample_every", format_double(c.sample_every));
    put("speed_window", format_double(c.speed_window));
    if (!c.snapshot_times.empty())
        put("snapshot_times", format_list(c.snapshot_times));
    put("output_dir", c.output_dir);

    switch (c.mode) {
    case RunMode::Sweep:
        put("axis", c.axis);
        put("values", format_list(c.values));
        put("report_times", format_list(c.report_times));
        break;
    case RunMode::Bisect:
        put("parameter", to_string(c.parameter));
        put("lower", format_double(*c.lower));
        put("upper", format_double(*c.upper));
        put("tolerance", format_double(c.tolerance));
        put("max_iterations", std::to_string(c.max_iterations));
        break;
    case RunMode::Convergence:
        put("refinements", std::to_string(c.refinements));
        break;
    default: break;
    }
    return out.str();
}

RunConfig load_config(const std::string& path, RunMode default_mode)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), default_mode);
}

}  // namespace chemofront
