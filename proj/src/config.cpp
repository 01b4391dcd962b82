#include "afwl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "afwl/error.hpp"

namespace afwl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf" || t == "infinity") return INFINITY;
  try {
    std::size_t used = 0;
    const double d = std::stod(t, &used);
    if (used == t.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Config, "key '" + key + "': '" + v + "' is not a number");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "output_dir", "seed", "threads",
      "metric.family", "metric.epsilon", "metric.gamma", "metric.delta", "metric.bump_radius",
      "metric.modulation_freq",
      "grid.n", "grid.dx",
      "sim.cfl", "sim.t_start", "sim.t_end", "sim.snapshot_dt", "sim.nonlinear", "sim.duhamel_tau_dt",
      "sim.allow_wrap", "sim.support_radius", "sim.checkpoint_every", "sim.write_slices",
      "data.kind", "data.amplitude", "data.width", "data.radius", "data.center", "data.mode",
      "morawetz.R", "morawetz.R0", "morawetz.J", "morawetz.T", "morawetz.W", "morawetz.stride",
      "morawetz.nodes_per_efold",
      "bound.E", "bound.A", "bound.C",
      "oracle.kind", "oracle.a", "oracle.delta", "oracle.sign", "oracle.t", "oracle.t0", "oracle.T",
      "oracle.r_count",
      "experiment.trajectory_dir", "experiment.n_samples", "experiment.norms", "experiment.gamma",
      "experiment.high_order_N", "experiment.eta", "experiment.t0", "experiment.T", "experiment.W",
      "experiment.interval", "experiment.dyadic_ts", "experiment.k", "experiment.mode",
      "experiment.radii", "experiment.source_samples"};
  return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', ErrorKind::Config, "line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require(!key.empty(), ErrorKind::Config, "line " + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    require(!cfg.has(key), ErrorKind::Config, "duplicate key '" + key + "'");
    cfg.entries_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Config, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_number(key, it->second);
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const double d = parse_number(key, it->second);
  require(std::floor(d) == d, ErrorKind::Config, "key '" + key + "' must be an integer");
  return static_cast<long long>(d);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorKind::Config, "key '" + key + "': '" + it->second + "' is not a boolean");
}

std::vector<double> KeyValueConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (trim(cell).empty()) continue;
    out.push_back(parse_number(key, cell));
  }
  return out;
}

RunConfig load_run_config(const KeyValueConfig& kv) {
  for (const auto& [key, value] : kv.entries())
    require(known_keys().count(key) != 0, ErrorKind::Config, "unknown config key '" + key + "'");

  RunConfig c;
  c.raw = kv;
  c.output_dir = kv.get_string("output_dir", c.output_dir);
  const long long seed = kv.get_int("seed", 0);
  require(seed >= 0, ErrorKind::Config, "seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.threads = static_cast<int>(kv.get_int("threads", 1));
  require(c.threads >= 1, ErrorKind::Config, "threads must be >= 1");

  c.metric.family = parse_metric_family(kv.get_string("metric.family", "Flat"));
  c.metric.epsilon = kv.get_double("metric.epsilon", c.metric.epsilon);
  c.metric.gamma = kv.get_double("metric.gamma", c.metric.gamma);
  c.metric.delta = kv.get_double("metric.delta", c.metric.delta);
  c.metric.bump_radius = kv.get_double("metric.bump_radius", c.metric.bump_radius);
  c.metric.modulation_freq = kv.get_double("metric.modulation_freq", c.metric.modulation_freq);
  c.metric.validate();

  c.grid.n = static_cast<int>(kv.get_int("grid.n", 64));
  c.grid.dx = kv.get_double("grid.dx", 0.25);
  c.grid.validate();

  c.sim.cfl = kv.get_double("sim.cfl", c.sim.cfl);
  c.t_start = kv.get_double("sim.t_start", 0.0);
  c.sim.t_end = kv.get_double("sim.t_end", c.sim.t_end);
  c.sim.snapshot_dt = kv.get_double("sim.snapshot_dt", c.sim.snapshot_dt);
  c.sim.nonlinear = kv.get_bool("sim.nonlinear", c.sim.nonlinear);
  c.sim.duhamel_tau_dt = kv.get_double("sim.duhamel_tau_dt", c.sim.duhamel_tau_dt);
  c.sim.allow_wrap = kv.get_bool("sim.allow_wrap", c.sim.allow_wrap);
  c.sim.support_radius = kv.get_double("sim.support_radius", c.sim.support_radius);
  const long long every = kv.get_int("sim.checkpoint_every", 0);
  require(every >= 0, ErrorKind::Config, "sim.checkpoint_every must be non-negative");
  c.checkpoint_every = static_cast<std::uint64_t>(every);
  c.write_slices = kv.get_bool("sim.write_slices", true);
  c.sim.validate();
  require(c.sim.t_end >= c.t_start, ErrorKind::Config, "sim.t_end must not precede sim.t_start");

  c.data.kind = parse_data_kind(kv.get_string("data.kind", "bump"));
  c.data.amplitude = kv.get_double("data.amplitude", c.data.amplitude);
  c.data.width = kv.get_double("data.width", c.data.width);
  c.data.radius = kv.get_double("data.radius", c.data.radius);
  const auto center = kv.get_list("data.center", {0.0, 0.0, 0.0});
  require(center.size() == 3, ErrorKind::Config, "data.center needs three numbers");
  std::copy(center.begin(), center.end(), c.data.center.begin());
  const auto mode = kv.get_list("data.mode", {1.0, 0.0, 0.0});
  require(mode.size() == 3, ErrorKind::Config, "data.mode needs three integers");
  for (int i = 0; i < 3; ++i) c.data.mode[i] = static_cast<int>(mode[i]);
  c.data.validate();

  c.morawetz.R = kv.get_double("morawetz.R", c.morawetz.R);
  c.morawetz.R0 = kv.get_double("morawetz.R0", c.morawetz.R0);
  c.morawetz.J = kv.get_double("morawetz.J", c.morawetz.J);
  c.morawetz.T = kv.get_double("morawetz.T", c.morawetz.T);
  c.morawetz.W = kv.get_double("morawetz.W", c.morawetz.W);
  c.morawetz.stride = kv.get_double("morawetz.stride", c.morawetz.stride);
  c.morawetz.nodes_per_efold = static_cast<int>(kv.get_int("morawetz.nodes_per_efold", c.morawetz.nodes_per_efold));
  return c;
}

void require_simulation_sections(const RunConfig& cfg) {
  for (const char* key : {"grid.n", "grid.dx", "sim.t_end", "sim.snapshot_dt"})
    require(cfg.raw.has(key) || cfg.raw.has("experiment.trajectory_dir"), ErrorKind::Config,
            std::string("missing required key '") + key + "'");
}

}  // namespace afwl
