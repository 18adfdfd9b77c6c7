#include "chemofront/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace chemofront {

std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
        throw OutputError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw OutputError("cannot open " + path.string() + " for writing");
    return out;
}

namespace {

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out)
        throw OutputError("write failed for " + path.string());
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text)
{
    auto out = open_output(path);
    out << text;
    finish(out, path);
}

void write_timeseries(const Trajectory& traj, std::ostream& out)
{
    out << "t,h,h_over_t,dh_dt,sup_w,w_at_0\n";
    for (const auto& s : traj.samples)
        out << format_number(s.t) << ',' << format_number(s.h) << ',' << format_number(s.h_over_t) << ','
            << format_number(s.dh_dt) << ',' << format_number(s.sup_w) << ',' << format_number(s.w_at_0)
            << '\n';
}

void write_timeseries(const Trajectory& traj, const std::filesystem::path& path)
{
    auto out = open_output(path);
    write_timeseries(traj, out);
    finish(out, path);
}

const Snapshot& nearest_snapshot(const Trajectory& traj, double time)
{
    if (traj.snapshots.empty())
        throw std::out_of_range("trajectory has no snapshots");
    const Snapshot* best = &traj.snapshots.front();
    for (const auto& s : traj.snapshots)
        if (std::abs(s.t - time) < std::abs(best->t - time))
            best = &s;
    return *best;
}

void write_snapshot(const Snapshot& snap, std::ostream& out)
{
    out << "z,x,w,v1,v2\n";
    for (std::size_t j = 0; j < snap.z.size(); ++j)
        out << format_number(snap.z[j]) << ',' << format_number(snap.x[j]) << ',' << format_number(snap.w[j])
            << ',' << format_number(snap.v1[j]) << ',' << format_number(snap.v2[j]) << '\n';
}

void write_snapshot(const Trajectory& traj, double time, const std::filesystem::path& path)
{
    const Snapshot& snap = nearest_snapshot(traj, time);
    auto out = open_output(path);
    write_snapshot(snap, out);
    finish(out, path);
}

void write_speed_table(const SpeedTable& table, std::ostream& out)
{
    out << 'T';
    for (double v : table.values)
        out << ',' << table.axis << '=' << format_number(v);
    out << '\n';
    for (std::size_t r = 0; r < table.report_times.size(); ++r) {
        out << format_number(table.report_times[r]);
        for (const auto& cell : table.cells[r]) {
            out << ',';
            if (cell)
                out << format_number(*cell);
        }
        out << '\n';
    }
}

void write_speed_table(const SpeedTable& table, const std::filesystem::path& path)
{
    auto out = open_output(path);
    write_speed_table(table, out);
    finish(out, path);
}

}  // namespace chemofront
