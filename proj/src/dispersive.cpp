#include "afwl/dispersive.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "afwl/error.hpp"
#include "afwl/field_ops.hpp"
#include "afwl/norms.hpp"

namespace afwl {

DecayFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values, double s) {
  require(times.size() == values.size() && times.size() >= 4, ErrorKind::Config,
          "a decay fit needs at least 4 samples");
  DecayFit fit;
  fit.times = times;
  fit.values = values;
  fit.s = s;
  const std::size_t n = times.size();
  std::vector<double> X(n), Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(values[i] > 0.0, ErrorKind::Config, "decay fit needs positive samples");
    X[i] = std::log(japanese(times[i] - s));
    Y[i] = std::log(values[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  require(sxx > 0.0, ErrorKind::Config, "decay fit needs distinct times");
  fit.p = sxy / sxx;
  const double logc = my - fit.p * mx;
  fit.c = std::exp(logc);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = Y[i] - (logc + fit.p * X[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

namespace {

double masked_sup(const ScalarField& f, const std::vector<char>& mask) {
  double m = 0.0;
  for (std::size_t id = 0; id < f.size(); ++id)
    if (mask.empty() || mask[id]) m = std::max(m, std::abs(f[id]));
  return m;
}

void check_horizon(const StateSlice& data, double duration, const SimConfig& config) {
  if (config.allow_wrap) return;
  const double support = config.support_radius >= 0.0 ? config.support_radius : data_support_radius(data);
  require(data.grid().half_extent() >= support + 1.2 * duration, ErrorKind::Config,
          "dyadic times exceed the wrap-exclusion horizon");
}

SimConfig unchecked(SimConfig c) {
  c.allow_wrap = true;
  return c;
}

}  // namespace

double derivative_sup(const StateSlice& s, const MetricSample& metric, int k, const std::vector<char>& mask) {
  require(k >= 0 && k <= 2, ErrorKind::Config, "derivative order must be 0, 1 or 2");
  if (k == 0) return masked_sup(s.u, mask);
  double m = 0.0;
  if (k == 1) {
    m = masked_sup(s.ut, mask);
    for (int a = 0; a < 3; ++a) m = std::max(m, masked_sup(derivative(s.u, a), mask));
    return m;
  }
  m = masked_sup(rhs(s, metric, false), mask);
  for (int a = 0; a < 3; ++a) {
    const ScalarField da = derivative(s.u, a);
    for (int b = a; b < 3; ++b) m = std::max(m, masked_sup(derivative(da, b), mask));
    m = std::max(m, masked_sup(derivative(s.ut, a), mask));
  }
  return m;
}

DecayFit dispersive_decay_fit(const StateSlice& data, const MetricSpec& spec, double s,
                              const std::vector<double>& dyadic_ts, int k, const SimConfig& config) {
  std::vector<double> ts = dyadic_ts;
  std::sort(ts.begin(), ts.end());
  require(ts.size() >= 4 && ts.front() >= s, ErrorKind::Config, "need >= 4 dyadic times after s");
  check_horizon(data, ts.back() - s, config);
  MetricSampler sampler(spec, data.grid());
  MetricSample metric;
  StateSlice state = data;
  double now = s;
  std::vector<double> values;
  for (double t : ts) {
    state = propagate_linear(state, now, t, spec, unchecked(config));
    now = t;
    sampler.sample(t, metric);
    values.push_back(derivative_sup(state, metric, k));
  }
  return fit_power_law(ts, values, s);
}

InteriorDecay interior_decay_experiment(const StateSlice& data, const MetricSpec& spec,
                                        const std::vector<double>& dyadic_ts, const SimConfig& config) {
  std::vector<double> ts = dyadic_ts;
  std::sort(ts.begin(), ts.end());
  const double s = data.t;
  require(ts.size() >= 4 && ts.front() > s, ErrorKind::Config, "need >= 4 dyadic times after the data time");
  check_horizon(data, ts.back() - s, config);
  const Grid3& g = data.grid();
  const std::size_t origin = g.index(g.n / 2, g.n / 2, g.n / 2);
  StateSlice state = data;
  double now = s;
  std::vector<double> cone, at_origin;
  for (double t : ts) {
    state = propagate_linear(state, now, t, spec, unchecked(config));
    now = t;
    std::vector<char> mask(g.size(), 0);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) mask[g.index(i, j, k)] = node_radius(g, i, j, k) <= 0.5 * (t - s);
    cone.push_back(masked_sup(state.u, mask));
    at_origin.push_back(std::abs(state.u[origin]));
  }
  return {fit_power_law(ts, cone, s), fit_power_law(ts, at_origin, s)};
}

RemotePast remote_past_term(const Trajectory& traj, const MetricSpec& spec, double t0, double T, double W,
                            const SimConfig& config) {
  require(t0 - T > traj.times.front(), ErrorKind::Config, "remote past needs t0 - T > start time");
  require(W >= 0.0, ErrorKind::Config, "evaluation window must be non-negative");
  const double h = traj.times.size() >= 2 ? traj.times[1] - traj.times[0] : config.snapshot_dt;
  const std::size_t ib = traj.find_time(t0 - T);
  require(ib != Trajectory::npos, ErrorKind::Config, "t0 - T must be a snapshot time");
  const int n_eval = std::max(1, static_cast<int>(std::round(W / h)));
  std::vector<double> evals;
  for (int k = 0; k <= n_eval; ++k) evals.push_back(t0 + k * h);
  const Trajectory N = duhamel_integral(traj, spec, traj.times.front(), traj.times[ib], evals, config);

  RemotePast out;
  std::vector<double> l4(N.slices.size()), l8(N.slices.size());
  for (std::size_t k = 0; k < N.slices.size(); ++k) {
    out.l_inf = std::max(out.l_inf, lebesgue_norm(N.slices[k].u, kInfinity));
    l4[k] = lebesgue_norm(N.slices[k].u, 4.0);
    l8[k] = lebesgue_norm(N.slices[k].u, 8.0);
  }
  out.l4 = mixed_norm_from_series(evals, l4, 4.0);
  out.l8 = mixed_norm_from_series(evals, l8, 8.0);
  out.holder_rhs = std::sqrt(out.l_inf * out.l4);
  out.holds = out.l8 <= out.holder_rhs * (1.0 + 1e-12);
  return out;
}

double source_decay_check(const Trajectory& traj, const MetricSpec& spec, double s, std::size_t n_samples,
                          std::uint64_t seed) {
  require(!traj.slices.empty(), ErrorKind::Config, "source_decay_check needs stored slices");
  if (spec.is_flat()) return 0.0;
  const Grid3& g = traj.grid;
  MetricSampler sampler(spec, g);
  MetricSample m;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  const double d_exp = 3.0 + std::max(spec.delta, 0.0);
  double worst = 0.0;
  for (const StateSlice& st : traj.slices) {
    sampler.sample(st.t, m);
    const ScalarField phi_tt = rhs(st, m, false);
    const Vector3Field d1 = gradient(st.u);
    std::array<ScalarField, 6> d2;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) d2[sym_index(a, b)] = derivative(d1[a], b);
    auto value_at = [&](std::size_t id) {
      double v = m.dt_g00[id] * st.ut[id] + (m.g00[id] + 1.0) * phi_tt[id];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const int c = sym_index(i, j);
          const double hij = m.gij[c][id] - (i == j ? 1.0 : 0.0);
          v += m.dk_gij[i * 6 + c][id] * d1[j][id] + hij * d2[c][id];
        }
      return std::abs(v);
    };
    const double weight_t = japanese(st.t - s);
    auto visit = [&](std::size_t id) {
      const int i = static_cast<int>(id / (static_cast<std::size_t>(g.n) * g.n));
      const int j = static_cast<int>((id / g.n) % g.n);
      const int k = static_cast<int>(id % g.n);
      const double wy = std::pow(japanese(node_radius(g, i, j, k)), d_exp);
      worst = std::max(worst, value_at(id) * weight_t * wy);
    };
    if (n_samples == 0 || n_samples >= g.size()) {
      for (std::size_t id = 0; id < g.size(); ++id) visit(id);
    } else {
      for (std::size_t q = 0; q < n_samples; ++q) visit(pick(rng));
    }
  }
  return worst;
}

DataNorms data_norms(const StateSlice& data) {
  DataNorms out;
  const double f2 = lebesgue_norm(data.u, 2.0), g2 = lebesgue_norm(data.ut, 2.0);
  const double f5 = sobolev_norm(data.u, 5.0), g4 = sobolev_norm(data.ut, 4.0);
  out.sobolev = std::sqrt(f2 * f2 + f5 * f5) + std::sqrt(g2 * g2 + g4 * g4);

  // Walk multi-indices in non-decreasing axis order so each appears once.
  auto w_norm = [](const ScalarField& f, int max_order) {
    double total = 0.0;
    std::vector<std::pair<ScalarField, int>> level{{f, 0}};
    for (int order = 0; order <= max_order; ++order) {
      std::vector<std::pair<ScalarField, int>> next;
      for (const auto& [h, last] : level) {
        total += lebesgue_norm(h, 1.0);
        if (order < max_order)
          for (int a = last; a < 3; ++a) next.emplace_back(derivative(h, a), a);
      }
      level = std::move(next);
    }
    return total;
  };
  out.w41 = w_norm(data.u, 4) + w_norm(data.ut, 3);
  return out;
}

}  // namespace afwl
