#include "afwl/norms.hpp"

#include <algorithm>
#include <cmath>

#include "afwl/error.hpp"
#include "afwl/field_ops.hpp"
#include "afwl/parallel.hpp"

namespace afwl {

namespace {

// sum over nodes of term(i, j, k, id), deterministic plane order, times dx^3.
template <class Term>
double node_integral(const Grid3& g, Term&& term) {
  const double s = ordered_sum(static_cast<std::size_t>(g.n), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) acc += term(i, j, k, g.index(i, j, k));
    return acc;
  });
  return s * g.cell_volume();
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

const std::vector<StateSlice>& require_slices(const Trajectory& traj) {
  require(traj.slices.size() == traj.times.size() && !traj.slices.empty(), ErrorKind::Config,
          "trajectory has no stored slices (keep_slices was off)");
  return traj.slices;
}

}  // namespace

ScalarField energy_density(const StateSlice& state, const MetricSample& metric) {
  const Grid3& g = state.grid();
  const Vector3Field du = gradient(state.u);
  ScalarField e(g);
  for (std::size_t id = 0; id < g.size(); ++id) {
    double quad;
    if (metric.flat) {
      quad = du[0][id] * du[0][id] + du[1][id] * du[1][id] + du[2][id] * du[2][id];
      quad *= 0.5;
    } else {
      double s = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += metric.gij[sym_index(a, b)][id] * du[a][id] * du[b][id];
      quad = -s / (2.0 * metric.g00[id]);
    }
    const double u = state.u[id], v = state.ut[id];
    const double u2 = u * u;
    e[id] = quad + 0.5 * v * v + u2 * u2 * u2 / 6.0;
  }
  return e;
}

double total_energy(const StateSlice& state, const MetricSample& metric) {
  return integrate(energy_density(state, metric));
}

double flat_energy(const StateSlice& state) {
  const Vector3Field du = gradient(state.u);
  return node_integral(state.grid(), [&](int, int, int, std::size_t id) {
    const double u = state.u[id], v = state.ut[id];
    const double u2 = u * u;
    return 0.5 * (v * v + du[0][id] * du[0][id] + du[1][id] * du[1][id] + du[2][id] * du[2][id]) +
           u2 * u2 * u2 / 6.0;
  });
}

double mixed_norm_from_series(const std::vector<double>& times, const std::vector<double>& spatial, double q) {
  require(times.size() == spatial.size() && times.size() >= 2, ErrorKind::Config,
          "mixed norm needs at least two snapshots");
  require(q >= 1.0, ErrorKind::Config, "time exponent must be >= 1");
  if (std::isinf(q)) return *std::max_element(spatial.begin(), spatial.end());
  std::vector<double> powq(spatial.size());
  for (std::size_t i = 0; i < spatial.size(); ++i) powq[i] = std::pow(spatial[i], q);
  return std::pow(trapezoid(times, powq), 1.0 / q);
}

double mixed_norm(const std::vector<ScalarField>& fields, const std::vector<double>& times, const MixedNormSpec& spec) {
  require(spec.r >= 1.0, ErrorKind::Config, "space exponent must be >= 1");
  std::vector<double> spatial(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) spatial[i] = lebesgue_norm(fields[i], spec.r);
  return mixed_norm_from_series(times, spatial, spec.q);
}

double mixed_norm(const std::vector<StateSlice>& slices, const std::vector<double>& times, const MixedNormSpec& spec) {
  require(spec.r >= 1.0, ErrorKind::Config, "space exponent must be >= 1");
  std::vector<double> spatial(slices.size());
  for (std::size_t i = 0; i < slices.size(); ++i) spatial[i] = lebesgue_norm(slices[i].u, spec.r);
  return mixed_norm_from_series(times, spatial, spec.q);
}

double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec) {
  return mixed_norm(require_slices(traj), traj.times, spec);
}

double le1_norm(const Trajectory& traj, double gamma, bool include_sextic) {
  require(gamma > 0.0, ErrorKind::Config, "gamma must be positive");
  const auto& slices = require_slices(traj);
  const Grid3& g = traj.grid;
  std::vector<double> per_time(slices.size());
  for (std::size_t s = 0; s < slices.size(); ++s) {
    const StateSlice& st = slices[s];
    const Vector3Field du = gradient(st.u);
    per_time[s] = node_integral(g, [&](int i, int j, int k, std::size_t id) {
      const double jr = japanese(node_radius(g, i, j, k));
      const double u = st.u[id], v = st.ut[id];
      const double grad2 = v * v + du[0][id] * du[0][id] + du[1][id] * du[1][id] + du[2][id] * du[2][id];
      double val = grad2 / std::pow(jr, 1.0 + gamma) + u * u / std::pow(jr, 3.0 + gamma);
      if (include_sextic) {
        const double u2 = u * u;
        val += u2 * u2 * u2 / jr;
      }
      return val;
    });
  }
  if (slices.size() < 2) return 0.0;
  return std::sqrt(trapezoid(traj.times, per_time));
}

double le_star_norm(const std::vector<ScalarField>& F, const std::vector<double>& times) {
  require(F.size() == times.size(), ErrorKind::Config, "le_star_norm: fields and times differ in length");
  if (F.size() < 2) return 0.0;
  std::vector<double> per_time(F.size());
  for (std::size_t s = 0; s < F.size(); ++s) {
    const Grid3& g = F[s].grid;
    per_time[s] = node_integral(g, [&](int i, int j, int k, std::size_t id) {
      return japanese(node_radius(g, i, j, k)) * F[s][id] * F[s][id];
    });
  }
  return std::sqrt(trapezoid(times, per_time));
}

double iled_ratio(const Trajectory& traj, const MetricSpec&, double gamma) {
  const auto& slices = require_slices(traj);
  const double e1 = flat_energy(slices.front());
  const double e2 = flat_energy(slices.back());
  const double le1 = le1_norm(traj, gamma, true);
  if (e1 == 0.0) {
    require(le1 == 0.0 && e2 == 0.0, ErrorKind::ZeroInitialEnergy, "E(T1) = 0 for a nonzero trajectory");
    return 0.0;
  }
  return (le1 * le1 + e2) / e1;
}

HighOrderEnergy high_order_energy(const Trajectory& traj, const MetricSpec&, int N) {
  require(N >= 0 && N <= 2, ErrorKind::Config, "high_order_energy supports N <= 2");
  const auto& slices = require_slices(traj);
  HighOrderEnergy out;
  out.times = traj.times;
  for (const StateSlice& st : slices) {
    // (d^alpha u, d^alpha u_t) for every spatial multi-index |alpha| <= N.
    std::vector<std::pair<ScalarField, ScalarField>> terms{{st.u, st.ut}};
    std::size_t level_begin = 0;
    std::vector<int> last_axis{0};
    for (int order = 1; order <= N; ++order) {
      const std::size_t level_end = terms.size();
      for (std::size_t p = level_begin; p < level_end; ++p)
        for (int a = last_axis[p]; a < 3; ++a) {
          terms.emplace_back(derivative(terms[p].first, a), derivative(terms[p].second, a));
          last_axis.push_back(a);
        }
      level_begin = level_end;
    }
    double total = 0.0;
    for (const auto& [w, wt] : terms) {
      const Vector3Field dw = gradient(w);
      total += node_integral(st.grid(), [&](int, int, int, std::size_t id) {
        return 0.5 * (wt[id] * wt[id] + dw[0][id] * dw[0][id] + dw[1][id] * dw[1][id] + dw[2][id] * dw[2][id]);
      });
    }
    out.energy.push_back(total);
  }
  const double e0 = out.energy.front();
  const double sup = *std::max_element(out.energy.begin(), out.energy.end());
  out.ratio = e0 > 0.0 ? sup / e0 : 0.0;
  return out;
}

std::size_t partition_count(double B, double eta) {
  require(eta > 0.0, ErrorKind::Config, "eta must be positive");
  const double ratio = std::pow(B / eta, 8.0);
  const double m = std::ceil(ratio * (1.0 - 1e-12));
  return static_cast<std::size_t>(std::max(1.0, m));
}

PartitionResult partition_by_l8(const std::vector<double>& times, const std::vector<double>& l8_pow8, double eta) {
  require(eta > 0.0, ErrorKind::Config, "eta must be positive");
  require(times.size() == l8_pow8.size() && times.size() >= 2, ErrorKind::Config,
          "partition needs at least two snapshots");
  std::vector<double> F(times.size(), 0.0);
  for (std::size_t i = 1; i < times.size(); ++i)
    F[i] = F[i - 1] + 0.5 * (times[i] - times[i - 1]) * (l8_pow8[i] + l8_pow8[i - 1]);

  PartitionResult res;
  res.t_begin = times.front();
  res.t_end = times.back();
  const double total = F.back();
  res.total_l8 = std::pow(total, 0.125);
  res.M = partition_count(res.total_l8, eta);
  const double level = std::pow(eta, 8.0);

  std::size_t seg = 1;
  for (std::size_t k = 1; k < res.M; ++k) {
    const double y = static_cast<double>(k) * level;
    if (y >= total) break;
    while (seg + 1 < F.size() && F[seg] < y) ++seg;
    const double f0 = F[seg - 1], f1 = F[seg];
    const double frac = f1 > f0 ? (y - f0) / (f1 - f0) : 0.0;
    res.endpoints.push_back(times[seg - 1] + frac * (times[seg] - times[seg - 1]));
  }

  // Interval masses from the same piecewise-linear F.
  auto F_at = [&](double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return F.front();
    if (it == times.end()) return F.back();
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double frac = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return F[i - 1] + frac * (F[i] - F[i - 1]);
  };
  std::vector<double> cuts{res.t_begin};
  cuts.insert(cuts.end(), res.endpoints.begin(), res.endpoints.end());
  cuts.push_back(res.t_end);
  res.verified = res.M <= partition_count(res.total_l8, eta);
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double mass = std::max(0.0, F_at(cuts[k]) - F_at(cuts[k - 1]));
    res.per_interval_l8.push_back(std::pow(mass, 0.125));
    res.verified = res.verified && res.per_interval_l8.back() <= 1.01 * eta;
  }
  return res;
}

PartitionResult partition_by_l8(const Trajectory& linear_traj, double eta) {
  const auto& slices = require_slices(linear_traj);
  std::vector<double> p8(slices.size());
  for (std::size_t i = 0; i < slices.size(); ++i) p8[i] = std::pow(lebesgue_norm(slices[i].u, 8.0), 8.0);
  return partition_by_l8(linear_traj.times, p8, eta);
}

BoundResult theorem_log_bound(const BoundInputs& in) {
  require(in.E >= 0.0 && in.A > 0.0 && in.C > 0.0, ErrorKind::Config, "bound inputs must be positive");
  BoundResult r;
  if (in.E == 0.0) {
    r.value = 0.0;
    r.log_value = -kInfinity;
    return r;
  }
  const double lE = std::log(in.E), lA = std::log(in.A), lC = std::log(in.C);
  r.exponent = std::exp(lC + (85.0 / 6.0) * lE + (13.0 / 14.0) * lE + 11.0 * lA);
  r.exponent_merged = std::exp(lC + (634.0 / 42.0) * lE + 11.0 * lA);
  r.log_value = lC + (4.0 / 7.0) * lE + lA + r.exponent;
  r.value = std::exp(r.log_value);
  return r;
}

BoundResult theorem_bound(const BoundInputs& in) {
  BoundResult r = theorem_log_bound(in);
  require(!(r.log_value > 700.0), ErrorKind::Overflow,
          "log of the bound is " + std::to_string(r.log_value) + " (> 700)");
  return r;
}

}  // namespace afwl
