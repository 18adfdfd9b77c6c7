#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "chemofront/dynamics.hpp"
#include "chemofront/stepper.hpp"

namespace chemofront {

/// Failed file operation; the message names the path.
class OutputError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Shortest representation that parses back to the same double,
/// independent of the global locale.
std::string format_number(double v);

/// `t,h,h_over_t,dh_dt,sup_w,w_at_0`, one row per sample.
void write_timeseries(const Trajectory& traj, std::ostream& out);
void write_timeseries(const Trajectory& traj, const std::filesystem::path& path);

/// `z,x,w,v1,v2` for the stored snapshot closest to `time`.
/// Throws std::out_of_range if the trajectory holds no snapshots.
const Snapshot& nearest_snapshot(const Trajectory& traj, double time);
void write_snapshot(const Snapshot& snap, std::ostream& out);
void write_snapshot(const Trajectory& traj, double time, const std::filesystem::path& path);

/// First column T, then one column per swept value; failed cells are empty.
void write_speed_table(const SpeedTable& table, std::ostream& out);
void write_speed_table(const SpeedTable& table, const std::filesystem::path& path);

/// Opens `path` for writing, creating parent directories.
std::ofstream open_output(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace chemofront
