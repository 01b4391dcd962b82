#include "afwl/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "afwl/error.hpp"
#include "afwl/field_ops.hpp"
#include "afwl/norms.hpp"
#include "afwl/parallel.hpp"

namespace afwl {

void SimConfig::validate() const {
  require(cfl > 0.0 && cfl <= 0.5, ErrorKind::Config, "sim.cfl must lie in (0, 0.5]");
  require(snapshot_dt > 0.0, ErrorKind::Config, "sim.snapshot_dt must be positive");
  require(duhamel_tau_dt >= 0.0, ErrorKind::Config, "sim.duhamel_tau_dt must be non-negative");
  require(std::isfinite(t_end), ErrorKind::Config, "sim.t_end must be finite");
}

TimeStepPlan plan_time_step(const Grid3& grid, const MetricSpec& spec, const SimConfig& config) {
  config.validate();
  const double dt0 = config.cfl * grid.dx / max_wave_speed(spec);
  TimeStepPlan plan;
  plan.steps_per_snapshot = static_cast<std::uint64_t>(std::max(1.0, std::ceil(config.snapshot_dt / dt0 - 1e-9)));
  plan.dt = config.snapshot_dt / static_cast<double>(plan.steps_per_snapshot);
  return plan;
}

std::size_t Trajectory::find_time(double t) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  auto it = std::lower_bound(times.begin(), times.end(), t - tol);
  if (it != times.end() && std::abs(*it - t) <= tol) return static_cast<std::size_t>(it - times.begin());
  return npos;
}

namespace {

inline double pow5(double u) {
  const double u2 = u * u;
  return u2 * u2 * u;
}

// Work buffers for one right-hand-side evaluation.
struct RhsScratch {
  Vector3Field du;
  Vector3Field flux;
};

void rhs_into(const ScalarField& u, const ScalarField& v, const MetricSample& m, bool nonlinear, ScalarField& out,
              RhsScratch& scratch) {
  const Grid3& g = u.grid;
  const int n = g.n;
  if (out.size() != u.size()) out = ScalarField(g);
  if (m.flat) {
    const double c = 0.25 / (g.dx * g.dx);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
      for (int i = static_cast<int>(b); i < static_cast<int>(e); ++i) {
        const int ip = g.wrap(i + 2), im = g.wrap(i - 2);
        for (int j = 0; j < n; ++j) {
          const int jp = g.wrap(j + 2), jm = g.wrap(j - 2);
          const std::size_t row = g.index(i, j, 0);
          const double* up = &u.values[g.index(ip, j, 0)];
          const double* um = &u.values[g.index(im, j, 0)];
          const double* vp = &u.values[g.index(i, jp, 0)];
          const double* vm = &u.values[g.index(i, jm, 0)];
          const double* u0 = &u.values[row];
          double* o = &out.values[row];
          for (int k = 0; k < n; ++k) {
            const int kp = (k + 2) % n, km = (k - 2 + n) % n;
            const double lap = c * (up[k] + um[k] + vp[k] + vm[k] + u0[kp] + u0[km] - 6.0 * u0[k]);
            o[k] = nonlinear ? lap - pow5(u0[k]) : lap;
          }
        }
      }
    });
    return;
  }
  for (int a = 0; a < 3; ++a) {
    scratch.du[a] = derivative(u, a);
  }
  const std::size_t N = g.size();
  for (int a = 0; a < 3; ++a) {
    if (scratch.flux[a].size() != N) scratch.flux[a] = ScalarField(g);
    for (std::size_t id = 0; id < N; ++id) {
      double f;
      if (m.isotropic) {
        f = m.gij[sym_index(a, a)][id] * scratch.du[a][id];
      } else {
        f = 0.0;
        for (int b = 0; b < 3; ++b) f += m.gij[sym_index(a, b)][id] * scratch.du[b][id];
      }
      scratch.flux[a][id] = f;
    }
  }
  const ScalarField div = divergence(scratch.flux);
  for (std::size_t id = 0; id < N; ++id) {
    const double src = nonlinear ? pow5(u[id]) : 0.0;
    out[id] = (src - div[id] - m.dt_g00[id] * v[id]) / m.g00[id];
  }
}

double max_abs2(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = std::max(std::abs(a[i]), std::abs(b[i]));
    if (!(x <= m)) m = x;  // also propagates NaN
  }
  return m;
}

// RK4 integrator with reusable buffers.
class Stepper {
 public:
  Stepper(const Grid3& g, const MetricSpec& spec, bool nonlinear)
      : sampler_(spec, g), nonlinear_(nonlinear), static_(spec.is_static() || spec.is_flat()),
        us_(g), vs_(g), acc_u_(g), acc_v_(g), a_(g) {
    if (static_) sampler_.sample(0.0, metric_);
  }

  const MetricSample& metric_at(double t) {
    if (!static_) sampler_.sample(t, metric_);
    return metric_;
  }

  void step(ScalarField& u, ScalarField& v, double t, double dt) {
    const std::size_t N = u.size();
    const double h = 0.5 * dt;
    rhs_into(u, v, metric_at(t), nonlinear_, a_, scratch_);
    for (std::size_t i = 0; i < N; ++i) {
      acc_u_[i] = v[i];
      acc_v_[i] = a_[i];
      us_[i] = u[i] + h * v[i];
      vs_[i] = v[i] + h * a_[i];
    }
    rhs_into(us_, vs_, metric_at(t + h), nonlinear_, a_, scratch_);
    for (std::size_t i = 0; i < N; ++i) {
      acc_u_[i] += 2.0 * vs_[i];
      acc_v_[i] += 2.0 * a_[i];
      us_[i] = u[i] + h * vs_[i];
      vs_[i] = v[i] + h * a_[i];
    }
    rhs_into(us_, vs_, metric_at(t + h), nonlinear_, a_, scratch_);
    for (std::size_t i = 0; i < N; ++i) {
      acc_u_[i] += 2.0 * vs_[i];
      acc_v_[i] += 2.0 * a_[i];
      us_[i] = u[i] + dt * vs_[i];
      vs_[i] = v[i] + dt * a_[i];
    }
    rhs_into(us_, vs_, metric_at(t + dt), nonlinear_, a_, scratch_);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < N; ++i) {
      u[i] += w * (acc_u_[i] + vs_[i]);
      v[i] += w * (acc_v_[i] + a_[i]);
    }
  }

 private:
  MetricSampler sampler_;
  MetricSample metric_;
  bool nonlinear_;
  bool static_;
  ScalarField us_, vs_, acc_u_, acc_v_, a_;
  RhsScratch scratch_;
};

// Linear flow from s to t without preconditions: whole steps of dt plus one
// shorter final step.
void propagate_in_place(Stepper& stepper, StateSlice& state, double s, double t, double dt) {
  const double span = t - s;
  const auto whole = static_cast<std::uint64_t>(std::floor(span / dt + 1e-9));
  for (std::uint64_t k = 0; k < whole; ++k) stepper.step(state.u, state.ut, s + static_cast<double>(k) * dt, dt);
  const double done = static_cast<double>(whole) * dt;
  const double rest = span - done;
  if (rest > 1e-9 * dt) stepper.step(state.u, state.ut, s + done, rest);
  state.t = t;
}

void check_wrap(const StateSlice& data, double duration, const SimConfig& config) {
  if (config.allow_wrap) return;
  const double support = config.support_radius >= 0.0 ? config.support_radius : data_support_radius(data);
  const double L = data.grid().half_extent();
  require(L >= support + 1.2 * duration, ErrorKind::Config,
          "wrap-exclusion precondition fails: half_extent " + std::to_string(L) + " < support " +
              std::to_string(support) + " + 1.2 * " + std::to_string(duration));
}

}  // namespace

ScalarField rhs(const StateSlice& state, const MetricSample& metric, bool nonlinear) {
  require(state.u.grid == metric.grid, ErrorKind::Config, "metric sampled on a different grid");
  ScalarField out(state.grid());
  RhsScratch scratch;
  rhs_into(state.u, state.ut, metric, nonlinear, out, scratch);
  return out;
}

double data_support_radius(const StateSlice& s) {
  const Grid3& g = s.grid();
  const double peak = max_abs2(s.u, s.ut);
  if (peak == 0.0) return 0.0;
  const double thr = 1e-10 * peak;
  double r = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const std::size_t id = g.index(i, j, k);
        if (std::abs(s.u[id]) > thr || std::abs(s.ut[id]) > thr) r = std::max(r, node_radius(g, i, j, k));
      }
  return r;
}

SnapshotScalars snapshot_scalars(const StateSlice& s, const MetricSample& metric) {
  SnapshotScalars sc;
  sc.energy = total_energy(s, metric);
  sc.l2 = lebesgue_norm(s.u, 2.0);
  sc.l6 = lebesgue_norm(s.u, 6.0);
  sc.linf = lebesgue_norm(s.u, kInfinity);
  return sc;
}

Trajectory evolve(const StateSlice& initial, const MetricSpec& spec, const SimConfig& config,
                  const EvolveHooks& hooks) {
  const Grid3& g = initial.grid();
  g.validate();
  spec.validate();
  require(initial.ut.grid == g, ErrorKind::Config, "u and u_t grids differ");
  require(initial.u.all_finite() && initial.ut.all_finite(), ErrorKind::Config, "initial data is not finite");
  const TimeStepPlan plan = plan_time_step(g, spec, config);
  const double dt = plan.dt;
  const double origin = std::isnan(hooks.origin) ? initial.t - static_cast<double>(hooks.start_step) * dt : hooks.origin;
  const double steps_real = (config.t_end - origin) / dt;
  const auto end_step = static_cast<std::uint64_t>(std::llround(std::max(0.0, steps_real)));
  require(std::abs(steps_real - static_cast<double>(end_step)) < 1e-6 && end_step % plan.steps_per_snapshot == 0,
          ErrorKind::Config, "sim.t_end must be a whole number of snapshot intervals after the start time");
  require(end_step >= hooks.start_step, ErrorKind::Config, "sim.t_end precedes the initial time");
  check_wrap(initial, config.t_end - initial.t, config);

  Trajectory traj;
  traj.grid = g;
  traj.metric = spec;
  traj.dt = dt;
  Stepper stepper(g, spec, config.nonlinear);
  StateSlice state = initial;

  auto emit = [&](std::uint64_t step) {
    state.t = origin + static_cast<double>(step) * dt;
    const SnapshotScalars sc = snapshot_scalars(state, stepper.metric_at(state.t));
    traj.times.push_back(state.t);
    traj.steps.push_back(step);
    traj.scalars.push_back(sc);
    if (config.keep_slices) traj.slices.push_back(state);
    if (hooks.on_snapshot) hooks.on_snapshot(state, step, sc);
  };

  if (hooks.emit_initial && hooks.start_step % plan.steps_per_snapshot == 0) emit(hooks.start_step);
  for (std::uint64_t step = hooks.start_step; step < end_step; ++step) {
    const double t = origin + static_cast<double>(step) * dt;
    stepper.step(state.u, state.ut, t, dt);
    const double peak = max_abs2(state.u, state.ut);
    if (!(peak <= 1e12)) throw InstabilityError(static_cast<std::int64_t>(step + 1), t + dt, peak);
    const std::uint64_t next = step + 1;
    state.t = origin + static_cast<double>(next) * dt;
    if (next % plan.steps_per_snapshot == 0) emit(next);
    if (hooks.checkpoint_every > 0 && hooks.on_checkpoint && next % hooks.checkpoint_every == 0)
      hooks.on_checkpoint(state, next, dt);
  }
  return traj;
}

StateSlice propagate_linear(const StateSlice& data, double s, double t, const MetricSpec& spec,
                            const SimConfig& config) {
  require(t >= s, ErrorKind::Config, "propagate_linear needs t >= s");
  spec.validate();
  StateSlice state = data;
  state.t = s;
  if (t == s) return state;
  check_wrap(data, t - s, config);
  const double dt = plan_time_step(data.grid(), spec, config).dt;
  Stepper stepper(data.grid(), spec, false);
  propagate_in_place(stepper, state, s, t, dt);
  return state;
}

Trajectory duhamel_integral(const Trajectory& source, const MetricSpec& spec, double a, double b,
                            const std::vector<double>& eval_times, const SimConfig& config, DuhamelMethod method) {
  require(!source.slices.empty() && source.slices.size() == source.times.size(), ErrorKind::Config,
          "duhamel_integral needs a trajectory with stored slices");
  require(a <= b, ErrorKind::Config, "duhamel_integral needs a <= b");
  const std::size_t ia = source.find_time(a), ib = source.find_time(b);
  require(ia != Trajectory::npos && ib != Trajectory::npos, ErrorKind::Config,
          "tau range endpoints must be snapshot times of the source trajectory");
  std::vector<double> evals = eval_times;
  std::sort(evals.begin(), evals.end());
  for (double t : evals) require(t >= b - 1e-12, ErrorKind::Config, "eval times must be >= b");

  const Grid3& g = source.grid;
  const double dt = source.dt > 0.0 ? source.dt : plan_time_step(g, spec, config).dt;
  std::vector<std::size_t> nodes{ia};
  if (ib > ia) {
    const double h_snap = source.times[ia + 1] - source.times[ia];
    const double tau_dt = config.duhamel_tau_dt > 0.0 ? config.duhamel_tau_dt : 10.0 * dt;
    const auto m = static_cast<std::size_t>(std::max(1LL, std::llround(tau_dt / h_snap)));
    for (std::size_t k = ia + m; k < ib; k += m) nodes.push_back(k);
    nodes.push_back(ib);
  }
  const std::size_t K = nodes.size();
  std::vector<double> tau(K), weight(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) tau[k] = source.times[nodes[k]];
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double h = tau[k + 1] - tau[k];
    weight[k] += 0.5 * h;
    weight[k + 1] += 0.5 * h;
  }

  MetricSampler sampler(spec, g);
  MetricSample metric;
  auto source_at = [&](std::size_t k) {
    sampler.sample(tau[k], metric);
    const ScalarField& u = source.slices[nodes[k]].u;
    ScalarField f(g);
    for (std::size_t id = 0; id < f.size(); ++id) f[id] = weight[k] * pow5(u[id]) / metric.g00[id];
    return f;
  };

  Trajectory out;
  out.grid = g;
  out.metric = spec;
  out.dt = dt;
  out.times = evals;
  Stepper stepper(g, spec, false);

  if (method == DuhamelMethod::Streaming) {
    StateSlice acc(g, tau[0]);
    for (std::size_t k = 0; k < K; ++k) {
      const ScalarField f = source_at(k);
      for (std::size_t id = 0; id < f.size(); ++id) acc.ut[id] += f[id];
      if (k + 1 < K) propagate_in_place(stepper, acc, tau[k], tau[k + 1], dt);
    }
    double now = tau[K - 1];
    for (double t : evals) {
      propagate_in_place(stepper, acc, now, t, dt);
      now = t;
      out.slices.push_back(acc);
    }
  } else {
    for (double t : evals) out.slices.emplace_back(g, t);
    for (std::size_t k = 0; k < K; ++k) {
      StateSlice piece(g, tau[k]);
      piece.ut = source_at(k);
      double now = tau[k];
      for (std::size_t e = 0; e < evals.size(); ++e) {
        propagate_in_place(stepper, piece, now, evals[e], dt);
        now = evals[e];
        for (std::size_t id = 0; id < piece.u.size(); ++id) {
          out.slices[e].u[id] += piece.u[id];
          out.slices[e].ut[id] += piece.ut[id];
        }
      }
    }
  }
  out.steps.assign(evals.size(), 0);
  out.scalars.resize(evals.size());
  for (std::size_t e = 0; e < evals.size(); ++e) {
    sampler.sample(evals[e], metric);
    out.scalars[e] = snapshot_scalars(out.slices[e], metric);
  }
  return out;
}

}  // namespace afwl
