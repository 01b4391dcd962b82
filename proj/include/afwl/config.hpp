#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "afwl/evolve.hpp"
#include "afwl/grid.hpp"
#include "afwl/initial_data.hpp"
#include "afwl/metric.hpp"
#include "afwl/morawetz.hpp"

namespace afwl {

/// Plain-text `key = value` pairs. Keys are dotted (`metric.epsilon`); a
/// `[section]` line prefixes the keys that follow it. `#` starts a comment.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig from_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated numbers; `inf` is accepted.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct RunConfig {
  MetricSpec metric;
  Grid3 grid;
  SimConfig sim;
  InitialDataSpec data;
  double t_start = 0.0;
  MorawetzConfig morawetz;
  KeyValueConfig raw;  // everything, including experiment.* and oracle.* keys
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  int threads = 1;
  std::uint64_t checkpoint_every = 0;
  bool write_slices = true;
};

/// Parses and validates every module section. Unknown keys are rejected.
RunConfig load_run_config(const KeyValueConfig& kv);

/// Sections that must be present for subcommands that run the solver.
void require_simulation_sections(const RunConfig& cfg);

}  // namespace afwl
