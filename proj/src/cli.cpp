#include "afwl/cli.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "afwl/config.hpp"
#include "afwl/dispersive.hpp"
#include "afwl/error.hpp"
#include "afwl/evolve.hpp"
#include "afwl/initial_data.hpp"
#include "afwl/metric.hpp"
#include "afwl/morawetz.hpp"
#include "afwl/norms.hpp"
#include "afwl/oracles.hpp"
#include "afwl/parallel.hpp"
#include "afwl/snapshot_io.hpp"
#include "afwl/trajectory_io.hpp"

#ifndef AFWL_VERSION
#define AFWL_VERSION "0.0.0"
#endif

namespace afwl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class OutputLock {
 public:
  explicit OutputLock(const fs::path& dir) : path_(dir / ".afwl.lock") {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    require(fd_ >= 0, ErrorKind::Io, "output directory " + dir.string() + " is locked by another run");
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto n = ::write(fd_, pid.data(), pid.size());
  }
  ~OutputLock() {
    ::close(fd_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::Io, "cannot write " + path.string());
  os << j.dump(2) << "\n";
}

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json resolved_config(const RunConfig& c) {
  json j;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["metric"] = {{"family", to_string(c.metric.family)},
                 {"epsilon", c.metric.epsilon},
                 {"gamma", c.metric.gamma},
                 {"delta", c.metric.delta},
                 {"bump_radius", c.metric.bump_radius},
                 {"modulation_freq", c.metric.modulation_freq}};
  j["grid"] = {{"n", c.grid.n}, {"dx", c.grid.dx}};
  j["sim"] = {{"cfl", c.sim.cfl},
              {"t_start", c.t_start},
              {"t_end", c.sim.t_end},
              {"snapshot_dt", c.sim.snapshot_dt},
              {"nonlinear", c.sim.nonlinear},
              {"duhamel_tau_dt", c.sim.duhamel_tau_dt},
              {"allow_wrap", c.sim.allow_wrap},
              {"support_radius", c.sim.support_radius},
              {"checkpoint_every", c.checkpoint_every},
              {"write_slices", c.write_slices}};
  j["data"] = {{"kind", to_string(c.data.kind)},
               {"amplitude", c.data.amplitude},
               {"width", c.data.width},
               {"radius", c.data.radius},
               {"center", c.data.center},
               {"mode", c.data.mode}};
  j["morawetz"] = {{"R", c.morawetz.R},
                   {"R0", c.morawetz.R0},
                   {"J", c.morawetz.J},
                   {"T", c.morawetz.T},
                   {"W", c.morawetz.W},
                   {"stride", c.morawetz.stride},
                   {"nodes_per_efold", c.morawetz.nodes_per_efold}};
  json extra = json::object();
  for (const auto& [k, v] : c.raw.entries())
    if (k.rfind("experiment.", 0) == 0 || k.rfind("oracle.", 0) == 0 || k.rfind("bound.", 0) == 0) extra[k] = v;
  j["experiment"] = extra;
  return j;
}

json units() {
  return {
      {"length", "grid units; the grid spans [-n dx / 2, n dx / 2) per axis"},
      {"time", "same units as length (unit wave speed in flat space)"},
      {"manifest.csv", {{"step", "RK4 step index"}, {"t", "time"}, {"energy", "node-sum energy, dx^3 scaled"},
                        {"l2", "L2 norm of u"}, {"l6", "L6 norm of u"}, {"linf", "max |u|"}}},
      {"norms.csv", {{"name", "norm label"}, {"q", "time exponent"}, {"r", "space exponent"},
                     {"value", "space-time norm"}, {"t_min", "time"}, {"t_max", "time"}}},
      {"morawetz.csv", {{"t", "time"}, {"M_R", "energy^2 x length"}, {"dM_numeric", "energy^2"},
                        {"main_density", "energy^2"}, {"boundary", "energy^2"}, {"residual", "energy^2"}}},
      {"dispersive.csv", {{"t", "time"}, {"sup_value", "sup norm of the k-th derivative"},
                          {"product_with_t", "sup_value * <t - s>"}}},
  };
}

struct Context {
  RunConfig cfg;
  fs::path out;
  std::ostream& stdout_;
};

StateSlice initial_state(const RunConfig& cfg) {
  return make_initial_data(cfg.grid, cfg.data, cfg.t_start);
}

Trajectory obtain_trajectory(const RunConfig& cfg, bool force_linear = false) {
  const std::string dir = cfg.raw.get_string("experiment.trajectory_dir", "");
  if (!dir.empty()) {
    Trajectory t = read_trajectory(dir, cfg.metric);
    require(!t.slices.empty(), ErrorKind::Io, "trajectory " + dir + " has no stored slices");
    return t;
  }
  require_simulation_sections(cfg);
  SimConfig sim = cfg.sim;
  sim.keep_slices = true;
  if (force_linear) sim.nonlinear = false;
  return evolve(initial_state(cfg), cfg.metric, sim);
}

std::vector<MixedNormSpec> parse_norm_list(const std::string& text) {
  std::vector<MixedNormSpec> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto colon = cell.find(':');
    require(colon != std::string::npos, ErrorKind::Config, "experiment.norms entries are q:r, got '" + cell + "'");
    KeyValueConfig tmp;
    tmp.set("q", cell.substr(0, colon));
    tmp.set("r", cell.substr(colon + 1));
    out.push_back({tmp.get_double("q", 0), tmp.get_double("r", 0)});
    require(out.back().q >= 1 && out.back().r >= 1, ErrorKind::Config, "norm exponents must be >= 1");
  }
  return out;
}

std::string norm_label(const MixedNormSpec& s) {
  auto f = [](double v) { return std::isinf(v) ? std::string("inf") : format_double(v); };
  return "L^" + f(s.q) + "_t L^" + f(s.r) + "_x";
}

std::vector<ScalarField> quintic_source(const Trajectory& traj) {
  std::vector<ScalarField> F;
  F.reserve(traj.slices.size());
  for (const auto& s : traj.slices) {
    ScalarField f = s.u;
    for (double& v : f.values) v = v * v * v * v * v;
    F.push_back(std::move(f));
  }
  return F;
}

int cmd_simulate(Context& ctx, const std::string& checkpoint_in) {
  const RunConfig& cfg = ctx.cfg;
  require_simulation_sections(cfg);
  SimConfig sim = cfg.sim;
  sim.keep_slices = false;
  const fs::path ck_path = ctx.out / "checkpoint.afck";

  StateSlice start;
  EvolveHooks hooks;
  hooks.origin = cfg.t_start;
  bool append = false;
  if (checkpoint_in.empty()) {
    start = initial_state(cfg);
  } else {
    Checkpoint ck = read_checkpoint(checkpoint_in);
    require(ck.state.grid() == cfg.grid, ErrorKind::ChecksumMismatch, "checkpoint grid does not match the config grid");
    const TimeStepPlan plan = plan_time_step(cfg.grid, cfg.metric, sim);
    require(ck.dt == plan.dt, ErrorKind::ChecksumMismatch, "checkpoint time step does not match the config");
    start = std::move(ck.state);
    hooks.start_step = ck.step;
    hooks.emit_initial = false;
    append = ck.step > 0;
    if (!append) hooks.emit_initial = true;
  }

  TrajectoryWriter writer(ctx.out, cfg.write_slices, append, hooks.start_step);
  StateSlice last;
  std::uint64_t last_step = 0;
  hooks.on_snapshot = [&](const StateSlice& s, std::uint64_t step, const SnapshotScalars& sc) {
    writer.write(s, step, sc);
    last = s;
    last_step = step;
  };
  hooks.checkpoint_every = cfg.checkpoint_every;
  hooks.on_checkpoint = [&](const StateSlice& s, std::uint64_t step, double dt) {
    write_checkpoint(ck_path, Checkpoint{s, step, dt});
  };
  const Trajectory traj = evolve(start, cfg.metric, sim, hooks);
  if (last_step > hooks.start_step || hooks.emit_initial) write_checkpoint(ck_path, Checkpoint{last, last_step, traj.dt});

  if (traj.scalars.empty()) {
    ctx.stdout_ << "snapshots=0\n";
    return 0;
  }
  const double e0 = traj.scalars.front().energy;
  const double e1 = traj.scalars.back().energy;
  const double drift = e0 == 0.0 ? std::abs(e1) : std::abs(e1 - e0) / std::abs(e0);
  ctx.stdout_ << "snapshots=" << traj.size() << " steps=" << traj.steps.back() << " dt=" << format_double(traj.dt)
              << " energy_drift=" << format_double(drift) << "\n";
  return 0;
}

int cmd_validate_metric(Context& ctx) {
  const auto n = static_cast<std::size_t>(ctx.cfg.raw.get_int("experiment.n_samples", 10000));
  const ValidationReport rep = validate_assumptions(ctx.cfg.metric, n, ctx.cfg.seed);
  auto cond = [](const ConditionResult& c) {
    return json{{"worst_ratio", num(c.worst_ratio)}, {"t", c.t}, {"x", c.x}};
  };
  json j{{"hyp_a", cond(rep.hyp_a)}, {"hyp_b", cond(rep.hyp_b)}, {"hyp_c", cond(rep.hyp_c)},
         {"hyp_d", cond(rep.hyp_d)}, {"sample_count", rep.sample_count}, {"r_min", rep.r_min},
         {"r_max", rep.r_max},       {"t_max", rep.t_max},         {"seed", rep.seed},
         {"pass", rep.pass}};
  write_json(ctx.out / "validation.json", j);
  ctx.stdout_ << "pass=" << (rep.pass ? "true" : "false") << " hyp_a=" << format_double(rep.hyp_a.worst_ratio)
              << " hyp_b=" << format_double(rep.hyp_b.worst_ratio) << " hyp_c=" << format_double(rep.hyp_c.worst_ratio)
              << " hyp_d=" << format_double(rep.hyp_d.worst_ratio) << "\n";
  return 0;
}

int cmd_norms(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Trajectory traj = obtain_trajectory(cfg);
  const auto specs = parse_norm_list(cfg.raw.get_string("experiment.norms", "8:8,4:12,5:10,inf:2,inf:6"));
  const double gamma = cfg.raw.get_double("experiment.gamma", cfg.metric.gamma);
  const double t0 = traj.times.front(), t1 = traj.times.back();

  std::ofstream csv(ctx.out / "norms.csv");
  require(static_cast<bool>(csv), ErrorKind::Io, "cannot write norms.csv");
  csv << "name,q,r,value,t_min,t_max\n";
  auto row = [&](const std::string& name, double q, double r, double v) {
    csv << name << "," << format_double(q) << "," << format_double(r) << "," << format_double(v) << ","
        << format_double(t0) << "," << format_double(t1) << "\n";
  };
  for (const auto& s : specs) row(norm_label(s), s.q, s.r, mixed_norm(traj, s));
  row("LE1", 2, 2, le1_norm(traj, gamma, false));
  row("LE1_sextic", 2, 2, le1_norm(traj, gamma, true));
  row("LEstar_u5", 2, 2, le_star_norm(quintic_source(traj), traj.times));

  const double l5l10 = mixed_norm(traj, {5, 10});
  const double l8 = mixed_norm(traj, {8, 8});
  const double l4l12 = mixed_norm(traj, {4, 12});
  const double rhs = std::pow(l8, 0.4) * std::pow(l4l12, 0.6);
  const bool holds = l5l10 <= rhs * (1 + 1e-12);
  write_json(ctx.out / "norms_checks.json",
             {{"interpolation", {{"lhs_L5L10", l5l10}, {"L8L8", l8}, {"L4L12", l4l12}, {"rhs", rhs}, {"holds", holds}}}});
  ctx.stdout_ << "L5L10=" << format_double(l5l10) << " bound=" << format_double(rhs)
              << " holds=" << (holds ? "true" : "false") << "\n";
  return 0;
}

int cmd_iled(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Trajectory traj = obtain_trajectory(cfg);
  const double gamma = cfg.raw.get_double("experiment.gamma", cfg.metric.gamma);
  const int N = static_cast<int>(cfg.raw.get_int("experiment.high_order_N", 1));
  const double ratio = iled_ratio(traj, cfg.metric, gamma);
  const HighOrderEnergy ho = high_order_energy(traj, cfg.metric, N);
  json j{{"gamma", gamma},
         {"T1", traj.times.front()},
         {"T2", traj.times.back()},
         {"E_T1", flat_energy(traj.slices.front())},
         {"E_T2", flat_energy(traj.slices.back())},
         {"le1", le1_norm(traj, gamma, false)},
         {"le1_sextic", le1_norm(traj, gamma, true)},
         {"iled_ratio", ratio},
         {"high_order", {{"N", N}, {"ratio", ho.ratio}, {"times", ho.times}, {"energy", ho.energy}}}};
  write_json(ctx.out / "iled.json", j);
  ctx.stdout_ << "iled_ratio=" << format_double(ratio) << " high_order_ratio=" << format_double(ho.ratio) << "\n";
  return 0;
}

int cmd_morawetz(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Trajectory traj = obtain_trajectory(cfg);
  cfg.morawetz.validate(traj.grid);
  const double R = cfg.morawetz.R;

  std::vector<MorawetzSnapshot> snaps;
  snaps.reserve(traj.size());
  for (const auto& s : traj.slices) snaps.push_back(morawetz_snapshot(s, sample_metric(cfg.metric, s.grid(), s.t)));
  const MorawetzLedger led = ledger(snaps, R);

  std::ofstream csv(ctx.out / "morawetz.csv");
  require(static_cast<bool>(csv), ErrorKind::Io, "cannot write morawetz.csv");
  csv << "t,M_R,dM_numeric,main_density,boundary,residual\n";
  for (std::size_t i = 0; i < led.times.size(); ++i)
    csv << format_double(led.times[i]) << "," << format_double(led.M_R[i]) << "," << format_double(led.dM_numeric[i])
        << "," << format_double(led.main_density[i]) << "," << format_double(led.boundary[i]) << ","
        << format_double(led.residual[i]) << "\n";

  const double E = led.energy.front();
  double min_positive = INFINITY;
  for (double v : led.positive_density) min_positive = std::min(min_positive, v);
  json j{{"R", R},
         {"E", E},
         {"potential_bound", num(E > 0 ? potential_bound(led, E, R) : 0.0)},
         {"residual_integral", led.residual_integral()},
         {"min_positive_density", num(min_positive)}};
  const double duration = traj.times.back() - traj.times.front();
  const double script_T = std::exp(cfg.morawetz.J) * cfg.morawetz.R0;
  if (duration >= script_T) {
    const AveragedMorawetz avg = averaged_morawetz(snaps, cfg.morawetz);
    j["averaged"] = {{"lhs", avg.lhs}, {"rhs_fit", num(avg.rhs_fit)}, {"script_T", avg.script_T}, {"E", avg.E}};
  } else {
    j["averaged"] = {{"skipped", "trajectory shorter than e^J R0"}, {"script_T", script_T}};
  }
  write_json(ctx.out / "morawetz_summary.json", j);
  ctx.stdout_ << "residual_integral=" << format_double(led.residual_integral()) << "\n";
  return 0;
}

std::pair<double, double> interval_of(const RunConfig& cfg, const Trajectory& traj) {
  const auto iv = cfg.raw.get_list("experiment.interval", {});
  if (iv.empty()) return {traj.times.front() + cfg.morawetz.T, traj.times.back() - cfg.morawetz.W};
  require(iv.size() == 2 && iv[0] <= iv[1], ErrorKind::Config, "experiment.interval needs two increasing times");
  return {iv[0], iv[1]};
}

int cmd_quiet(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Trajectory traj = obtain_trajectory(cfg);
  const auto [a, b] = interval_of(cfg, traj);
  const QuietTimeResult q = quiet_time_search(traj, cfg.metric, a, b, cfg.morawetz, cfg.sim);
  std::ofstream os(ctx.out / "quiet.jsonl");
  require(static_cast<bool>(os), ErrorKind::Io, "cannot write quiet.jsonl");
  json cands = json::array();
  for (const auto& c : q.candidates) cands.push_back({{"t0", c.t0}, {"duhamel_l8", c.duhamel_l8}});
  os << json{{"t0", q.t0}, {"duhamel_l8", q.duhamel_l8}, {"candidates", cands}}.dump() << "\n";
  ctx.stdout_ << "t0=" << format_double(q.t0) << " duhamel_l8=" << format_double(q.duhamel_l8) << "\n";
  return 0;
}

int cmd_remote_past(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Trajectory traj = obtain_trajectory(cfg);
  const double T = cfg.raw.get_double("experiment.T", cfg.morawetz.T);
  const double W = cfg.raw.get_double("experiment.W", cfg.morawetz.W);
  const double t0 = cfg.raw.get_double("experiment.t0", traj.times.back() - W);
  const RemotePast rp = remote_past_term(traj, cfg.metric, t0, T, W, cfg.sim);
  write_json(ctx.out / "remote_past.json", {{"t0", t0},
                                            {"T", T},
                                            {"W", W},
                                            {"l_inf", rp.l_inf},
                                            {"l4", rp.l4},
                                            {"l8", rp.l8},
                                            {"holder_rhs", rp.holder_rhs},
                                            {"holds", rp.holds}});
  ctx.stdout_ << "l8=" << format_double(rp.l8) << " holder_rhs=" << format_double(rp.holder_rhs)
              << " holds=" << (rp.holds ? "true" : "false") << "\n";
  return 0;
}

json fit_json(const DecayFit& f) {
  return {{"s", f.s}, {"p", num(f.p)}, {"c", num(f.c)}, {"residual", num(f.residual)},
          {"times", f.times}, {"values", f.values}};
}

int cmd_dispersive(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  require_simulation_sections(cfg);
  const StateSlice data = initial_state(cfg);
  const auto ts = cfg.raw.get_list("experiment.dyadic_ts", {3, 6, 12, 24});
  const int k = static_cast<int>(cfg.raw.get_int("experiment.k", 0));
  const std::string mode = cfg.raw.get_string("experiment.mode", "global");
  const double s = cfg.t_start;

  std::ofstream csv(ctx.out / "dispersive.csv");
  require(static_cast<bool>(csv), ErrorKind::Io, "cannot write dispersive.csv");
  csv << "t,sup_value,product_with_t\n";
  auto rows = [&](const DecayFit& f) {
    for (std::size_t i = 0; i < f.times.size(); ++i)
      csv << format_double(f.times[i]) << "," << format_double(f.values[i]) << ","
          << format_double(f.values[i] * std::hypot(1.0, f.times[i] - s)) << "\n";
  };
  const DataNorms dn = data_norms(data);
  json j{{"mode", mode}, {"k", k}, {"data_norms", {{"sobolev", dn.sobolev}, {"w41", dn.w41}}}};
  if (mode == "global") {
    const DecayFit f = dispersive_decay_fit(data, cfg.metric, s, ts, k, cfg.sim);
    rows(f);
    j["fit"] = fit_json(f);
    ctx.stdout_ << "p=" << format_double(f.p) << "\n";
  } else if (mode == "interior") {
    const InteriorDecay d = interior_decay_experiment(data, cfg.metric, ts, cfg.sim);
    rows(d.cone);
    j["cone"] = fit_json(d.cone);
    j["origin"] = fit_json(d.origin);
    ctx.stdout_ << "p_cone=" << format_double(d.cone.p) << " p_origin=" << format_double(d.origin.p) << "\n";
  } else {
    throw Error(ErrorKind::Config, "experiment.mode must be global or interior");
  }
  const auto samples = cfg.raw.get_int("experiment.source_samples", -1);
  if (samples >= 0 && !cfg.metric.is_flat()) {
    SimConfig sim = cfg.sim;
    sim.keep_slices = true;
    sim.nonlinear = false;
    const Trajectory lin = evolve(data, cfg.metric, sim);
    j["source_decay"] = source_decay_check(lin, cfg.metric, s, static_cast<std::size_t>(samples), cfg.seed);
  }
  write_json(ctx.out / "dispersive_fit.json", j);
  return 0;
}

int cmd_oracle(Context& ctx) {
  const KeyValueConfig& kv = ctx.cfg.raw;
  const std::string kind = kv.get_string("oracle.kind", "kernel");
  json j;
  if (kind == "kernel") {
    const double a = kv.get_double("oracle.a", 1.0);
    const double delta = kv.get_double("oracle.delta", ctx.cfg.metric.delta);
    const int sign = static_cast<int>(kv.get_int("oracle.sign", 1));
    require(sign == 1 || sign == -1, ErrorKind::Config, "oracle.sign must be 1 or -1");
    const KernelIntegral r = kernel_integral_oracle(a, delta, sign);
    j = {{"kind", kind},
         {"params", {{"a", a}, {"delta", delta}, {"sign", sign}}},
         {"value", r.value},
         {"tail_bound", r.tail_bound},
         {"quad_error", r.quad_error},
         {"cut", r.cut}};
  } else if (kind == "tail" || kind == "holder_tail") {
    const double t = kv.get_double("oracle.t", 10.0);
    const double t0 = kv.get_double("oracle.t0", t);
    const double T = kv.get_double("oracle.T", 1.0);
    const double delta = kv.get_double("oracle.delta", ctx.cfg.metric.delta);
    const int count = static_cast<int>(kv.get_int("oracle.r_count", 2001));
    const HolderTail h = holder_tail_oracle(t, t0, T, delta, default_r_grid(t, count));
    j = {{"kind", kind},
         {"params", {{"t", t}, {"t0", t0}, {"T", T}, {"delta", delta}, {"r_count", count}}},
         {"value", h.value},
         {"sup", h.sup},
         {"argmax_r", h.argmax_r}};
  } else {
    throw Error(ErrorKind::Config, "oracle.kind must be kernel or tail");
  }
  write_json(ctx.out / "oracle.json", j);
  ctx.stdout_ << j.dump() << "\n";
  return 0;
}

int cmd_partition(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  require(cfg.raw.has("experiment.eta"), ErrorKind::Config, "partition needs experiment.eta");
  const double eta = cfg.raw.get_double("experiment.eta", 1.0);
  const Trajectory traj = obtain_trajectory(cfg, true);
  const PartitionResult p = partition_by_l8(traj, eta);
  write_json(ctx.out / "partition.json", {{"eta", eta},
                                          {"t_begin", p.t_begin},
                                          {"t_end", p.t_end},
                                          {"B", p.total_l8},
                                          {"M", p.M},
                                          {"endpoints", p.endpoints},
                                          {"per_interval_l8", p.per_interval_l8},
                                          {"verified", p.verified}});
  ctx.stdout_ << "M=" << p.M << " B=" << format_double(p.total_l8) << " verified=" << (p.verified ? "true" : "false")
              << "\n";
  return 0;
}

int cmd_bound(Context& ctx) {
  const KeyValueConfig& kv = ctx.cfg.raw;
  BoundInputs in{kv.get_double("bound.E", 1.0), kv.get_double("bound.A", 1.0), kv.get_double("bound.C", 1.0)};
  const BoundResult r = theorem_bound(in);
  write_json(ctx.out / "bound.json", {{"E", in.E},
                                      {"A", in.A},
                                      {"C", in.C},
                                      {"value", r.value},
                                      {"log_bound", r.log_value},
                                      {"exponent", r.exponent},
                                      {"exponent_merged", r.exponent_merged}});
  ctx.stdout_ << std::setprecision(17) << r.value << "\n" << "log_bound=" << format_double(r.log_value) << "\n";
  return 0;
}

void write_error_record(const fs::path& out, const Error& e) {
  json j{{"error", to_string(e.kind())}, {"message", e.what()}};
  if (const auto* ie = dynamic_cast<const InstabilityError*>(&e)) {
    j["step"] = ie->step();
    j["t"] = ie->time();
  }
  std::error_code ec;
  fs::create_directories(out, ec);
  std::ofstream os(out / "error.json");
  if (os) os << j.dump(2) << "\n";
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"simulate",   "resume",     "validate-metric", "norms",
                                              "iled",       "morawetz",   "quiet",           "remote-past",
                                              "dispersive", "oracle",     "partition",       "bound"};
  return names;
}

int run_cli(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  fs::path out_dir;
  try {
    bool known = false;
    for (const auto& s : subcommands()) known = known || s == opts.subcommand;
    require(known, ErrorKind::Config, "unknown subcommand '" + opts.subcommand + "'");

    KeyValueConfig kv = opts.config_path.empty() ? KeyValueConfig{} : KeyValueConfig::from_file(opts.config_path);
    RunConfig cfg = load_run_config(kv);
    if (!opts.out_dir.empty()) {
      cfg.output_dir = opts.out_dir;
    } else if (const char* env = std::getenv("OUTPUT_DIR"); env != nullptr && *env != '\0') {
      cfg.output_dir = env;
    }
    if (opts.threads > 0) cfg.threads = opts.threads;
    require(opts.threads == -1 || opts.threads > 0, ErrorKind::Config, "--threads must be >= 1");
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    set_thread_count(cfg.threads);

    out_dir = cfg.output_dir;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    require(fs::is_directory(out_dir), ErrorKind::Io, "cannot create output directory " + out_dir.string());
    OutputLock lock(out_dir);

    json run{{"subcommand", opts.subcommand},
             {"version", AFWL_VERSION},
             {"config_path", opts.config_path},
             {"config", resolved_config(cfg)},
             {"units", units()}};
    if (opts.subcommand == "resume") run["checkpoint"] = opts.checkpoint_path;
    write_json(out_dir / "run.json", run);

    Context ctx{cfg, out_dir, out};
    const std::string& sc = opts.subcommand;
    if (sc == "simulate") return cmd_simulate(ctx, "");
    if (sc == "resume") {
      require(!opts.checkpoint_path.empty(), ErrorKind::Config, "resume needs --checkpoint");
      return cmd_simulate(ctx, opts.checkpoint_path);
    }
    if (sc == "validate-metric") return cmd_validate_metric(ctx);
    if (sc == "norms") return cmd_norms(ctx);
    if (sc == "iled") return cmd_iled(ctx);
    if (sc == "morawetz") return cmd_morawetz(ctx);
    if (sc == "quiet") return cmd_quiet(ctx);
    if (sc == "remote-past") return cmd_remote_past(ctx);
    if (sc == "dispersive") return cmd_dispersive(ctx);
    if (sc == "oracle") return cmd_oracle(ctx);
    if (sc == "partition") return cmd_partition(ctx);
    return cmd_bound(ctx);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.is_numerical()) {
      if (!out_dir.empty()) write_error_record(out_dir, e);
      return 2;
    }
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace afwl
