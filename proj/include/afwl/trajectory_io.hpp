#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "afwl/evolve.hpp"

namespace afwl {

/// Streams snapshots into a directory: one state file per snapshot named
/// slice_<step>.afwl plus manifest.csv (step,t,energy,l2,l6,linf).
class TrajectoryWriter {
 public:
  /// `append` keeps the rows of an existing manifest up to step
  /// `keep_through` (used when resuming).
  TrajectoryWriter(const std::filesystem::path& dir, bool write_slices, bool append = false,
                   std::uint64_t keep_through = UINT64_MAX);
  void write(const StateSlice& s, std::uint64_t step, const SnapshotScalars& sc);
  static std::string slice_name(std::uint64_t step);

 private:
  std::filesystem::path dir_;
  bool write_slices_;
  std::ofstream manifest_;
};

/// Loads a directory written by TrajectoryWriter. Slices are read when every
/// manifest row has its file.
Trajectory read_trajectory(const std::filesystem::path& dir, const MetricSpec& spec);

std::string format_double(double v);

}  // namespace afwl
