#include "afwl/trajectory_io.hpp"

#include <cstdio>
#include <sstream>
#include <vector>

#include "afwl/error.hpp"
#include "afwl/snapshot_io.hpp"

namespace afwl {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string TrajectoryWriter::slice_name(std::uint64_t step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "slice_%08llu.afwl", static_cast<unsigned long long>(step));
  return buf;
}

TrajectoryWriter::TrajectoryWriter(const std::filesystem::path& dir, bool write_slices, bool append,
                                   std::uint64_t keep_through)
    : dir_(dir), write_slices_(write_slices) {
  std::filesystem::create_directories(dir_);
  const auto path = dir_ / "manifest.csv";
  std::vector<std::string> kept;
  if (append && std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (std::stoull(line.substr(0, line.find(','))) <= keep_through) kept.push_back(line);
    }
  }
  manifest_.open(path, std::ios::trunc);
  require(static_cast<bool>(manifest_), ErrorKind::Io, "cannot open " + path.string());
  manifest_ << "step,t,energy,l2,l6,linf\n";
  for (const auto& line : kept) manifest_ << line << '\n';
  manifest_.flush();
}

void TrajectoryWriter::write(const StateSlice& s, std::uint64_t step, const SnapshotScalars& sc) {
  if (write_slices_) write_state(dir_ / slice_name(step), s);
  manifest_ << step << ',' << format_double(s.t) << ',' << format_double(sc.energy) << ',' << format_double(sc.l2)
            << ',' << format_double(sc.l6) << ',' << format_double(sc.linf) << '\n';
  manifest_.flush();
}

Trajectory read_trajectory(const std::filesystem::path& dir, const MetricSpec& spec) {
  std::ifstream in(dir / "manifest.csv");
  require(static_cast<bool>(in), ErrorKind::Io, "no manifest.csv in " + dir.string());
  std::string line;
  std::getline(in, line);
  require(line == "step,t,energy,l2,l6,linf", ErrorKind::Io, "unexpected manifest header in " + dir.string());
  Trajectory traj;
  traj.metric = spec;
  bool all_files = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    require(v.size() == 6, ErrorKind::Io, "malformed manifest row: " + line);
    const auto step = static_cast<std::uint64_t>(v[0]);
    traj.steps.push_back(step);
    traj.times.push_back(v[1]);
    traj.scalars.push_back({v[2], v[3], v[4], v[5]});
    all_files = all_files && std::filesystem::exists(dir / TrajectoryWriter::slice_name(step));
  }
  if (all_files) {
    for (std::uint64_t step : traj.steps) traj.slices.push_back(read_state(dir / TrajectoryWriter::slice_name(step)));
    if (!traj.slices.empty()) traj.grid = traj.slices.front().grid();
  }
  if (traj.steps.size() >= 2 && traj.steps[1] > traj.steps[0])
    traj.dt = (traj.times[1] - traj.times[0]) / static_cast<double>(traj.steps[1] - traj.steps[0]);
  return traj;
}

}  // namespace afwl
