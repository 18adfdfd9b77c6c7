#include "chemofront/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chemofront/output.hpp"

namespace chemofront {

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double left = 70.0;
constexpr double right = 20.0;
constexpr double top = 40.0;
constexpr double bottom = 55.0;
constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                             "#17becf"};

std::string fixed(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    std::string s(buf, ptr);
    return s == "-0.00" ? "0.00" : s;
}

std::string tick_label(double v)
{
    if (std::abs(v) < 1e-12)
        v = 0.0;
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
    return std::string(buf, ptr);
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    void pad()
    {
        if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
            const double d = std::abs(hi) > 0.0 ? 0.05 * std::abs(hi) : 0.5;
            lo -= d;
            hi += d;
        }
    }
};

}  // namespace

std::string render_svg(const PlotSpec& spec)
{
    Range xr, yr;
    std::size_t points = 0;
    for (const auto& s : spec.series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("series '" + s.label + "' has mismatched x and y lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                throw std::invalid_argument("series '" + s.label + "' contains a non-finite value");
            xr.add(s.x[i]);
            yr.add(s.y[i]);
        }
        points += s.x.size();
    }
    if (points == 0)
        throw std::invalid_argument("plot has no data points");
    xr.pad();
    yr.pad();

    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width) + "\" height=\"" + fixed(height) +
         "\" viewBox=\"0 0 " + fixed(width) + " " + fixed(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + fixed(width / 2) + "\" y=\"24.00\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(spec.title) + "</text>\n";
    o += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(pw) + "\" height=\"" +
         fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int ticks = 5;
    for (int k = 0; k <= ticks; ++k) {
        const double xv = xr.lo + (xr.hi - xr.lo) * k / ticks;
        const double yv = yr.lo + (yr.hi - yr.lo) * k / ticks;
        const double X = px(xv);
        const double Y = py(yv);
        o += "<line x1=\"" + fixed(X) + "\" y1=\"" + fixed(top + ph) + "\" x2=\"" + fixed(X) + "\" y2=\"" +
             fixed(top + ph + 5) + "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + fixed(X) + "\" y=\"" + fixed(top + ph + 19) + "\" text-anchor=\"middle\">" +
             tick_label(xv) + "</text>\n";
        o += "<line x1=\"" + fixed(left - 5) + "\" y1=\"" + fixed(Y) + "\" x2=\"" + fixed(left) + "\" y2=\"" +
             fixed(Y) + "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + fixed(left - 8) + "\" y=\"" + fixed(Y + 4) + "\" text-anchor=\"end\">" +
             tick_label(yv) + "</text>\n";
    }
    o += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"" + fixed(height - 12) + "\" text-anchor=\"middle\">" +
         escape(spec.x_label) + "</text>\n";
    o += "<text x=\"16.00\" y=\"" + fixed(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16.00 " +
         fixed(top + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const auto& s = spec.series[i];
        const char* colour = palette[i % palette.size()];
        if (s.x.size() == 1) {
            o += "<circle cx=\"" + fixed(px(s.x[0])) + "\" cy=\"" + fixed(py(s.y[0])) + "\" r=\"4.00\" fill=\"" +
                 colour + "\"/>\n";
        } else if (!s.x.empty()) {
            o += "<polyline fill=\"none\" stroke=\"";
            o += colour;
            o += "\" stroke-width=\"1.50\" points=\"";
            for (std::size_t j = 0; j < s.x.size(); ++j) {
                if (j)
                    o += ' ';
                o += fixed(px(s.x[j])) + "," + fixed(py(s.y[j]));
            }
            o += "\"/>\n";
        }
        if (!s.label.empty()) {
            const double ly = top + 16.0 + 16.0 * static_cast<double>(i);
            o += "<line x1=\"" + fixed(left + pw - 120) + "\" y1=\"" + fixed(ly - 4) + "\" x2=\"" +
                 fixed(left + pw - 100) + "\" y2=\"" + fixed(ly - 4) + "\" stroke=\"" + colour +
                 "\" stroke-width=\"2.00\"/>\n";
            o += "<text x=\"" + fixed(left + pw - 95) + "\" y=\"" + fixed(ly) + "\">" + escape(s.label) +
                 "</text>\n";
        }
    }
    o += "</svg>\n";
    return o;
}

void emit_plot(const PlotSpec& spec, const std::filesystem::path& path)
{
    write_text(path, render_svg(spec));
}

}  // namespace chemofront
