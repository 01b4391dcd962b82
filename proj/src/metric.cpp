#include "afwl/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "afwl/error.hpp"
#include "afwl/field_ops.hpp"
#include "afwl/jet.hpp"
#include "afwl/parallel.hpp"

namespace afwl {

std::string to_string(MetricFamily f) {
  switch (f) {
    case MetricFamily::Flat: return "Flat";
    case MetricFamily::StaticBump: return "StaticBump";
    case MetricFamily::TimeModulatedBump: return "TimeModulatedBump";
  }
  return "Flat";
}

MetricFamily parse_metric_family(const std::string& s) {
  if (s == "Flat" || s == "flat") return MetricFamily::Flat;
  if (s == "StaticBump" || s == "static_bump") return MetricFamily::StaticBump;
  if (s == "TimeModulatedBump" || s == "time_modulated_bump") return MetricFamily::TimeModulatedBump;
  throw Error(ErrorKind::Config, "unknown metric family '" + s + "'");
}

void MetricSpec::validate() const {
  require(std::isfinite(epsilon), ErrorKind::Config, "metric.epsilon must be finite");
  require(gamma > 0.0, ErrorKind::Config, "metric.gamma must be positive");
  // delta <= 0 is accepted so slowly decaying negative controls can be built.
  require(delta > -3.0, ErrorKind::Config, "metric.delta must exceed -3");
  require(bump_radius > 0.0, ErrorKind::Config, "metric.bump_radius must be positive");
  require(modulation_freq >= 0.0, ErrorKind::Config, "metric.modulation_freq must be non-negative");
}

namespace {

double kappa(const MetricSpec& spec) { return 0.5 * (3.0 + spec.delta); }

double amplitude(const MetricSpec& spec, double t) {
  if (spec.family == MetricFamily::Flat) return 0.0;
  return spec.epsilon * time_factor(spec, t, 0);
}

}  // namespace

double bump_profile(const MetricSpec& spec, double r2) {
  const double rho = spec.bump_radius;
  return std::pow(1.0 + r2 / (rho * rho), -kappa(spec));
}

double time_factor(const MetricSpec& spec, double t, int order) {
  if (spec.family != MetricFamily::TimeModulatedBump) return order == 0 ? 1.0 : 0.0;
  const double w = spec.modulation_freq;
  // tau = (1 + cos wt)/2; d^a cos(wt) = w^a cos(wt + a pi/2).
  if (order == 0) return 0.5 * (1.0 + std::cos(w * t));
  return 0.5 * std::pow(w, order) * std::cos(w * t + order * M_PI / 2.0);
}

std::array<std::array<double, 4>, 4> perturbation(const MetricSpec& spec, double t, const std::array<double, 3>& x) {
  std::array<std::array<double, 4>, 4> h{};
  const double a = amplitude(spec, t);
  if (a == 0.0) return h;
  const double p = a * bump_profile(spec, x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  for (int m = 0; m < 4; ++m) h[m][m] = p;
  return h;
}

double max_wave_speed(const MetricSpec& spec) {
  if (spec.is_flat()) return 1.0;
  const double e = std::abs(spec.epsilon);
  require(e < 1.0, ErrorKind::NonLorentzian, "|epsilon| >= 1: g00 or g^{ij} degenerates at the bump centre");
  return std::sqrt((1.0 + e) / (1.0 - e));
}

MetricSampler::MetricSampler(const MetricSpec& spec, const Grid3& grid) : spec_(spec), grid_(grid) {
  spec_.validate();
  if (spec_.is_flat()) return;
  profile_ = ScalarField(grid);
  for (auto& f : grad_profile_) f = ScalarField(grid);
  const double rho2 = spec.bump_radius * spec.bump_radius;
  const double k = kappa(spec);
  parallel_for(static_cast<std::size_t>(grid.n), [&](std::size_t b, std::size_t e) {
    for (int i = static_cast<int>(b); i < static_cast<int>(e); ++i)
      for (int j = 0; j < grid.n; ++j)
        for (int l = 0; l < grid.n; ++l) {
          const double x[3] = {grid.coord(i), grid.coord(j), grid.coord(l)};
          const double s = 1.0 + (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / rho2;
          const double p = std::pow(s, -k);
          const std::size_t id = grid.index(i, j, l);
          profile_[id] = p;
          // dP/dx_m = -k s^{-k-1} * 2 x_m / rho^2
          const double c = -k * p / s * 2.0 / rho2;
          for (int m = 0; m < 3; ++m) grad_profile_[m][id] = c * x[m];
        }
  });
}

void MetricSampler::sample(double t, MetricSample& out) const {
  const std::size_t N = grid_.size();
  const bool fresh = out.g00.size() != N || out.grid != grid_;
  out.grid = grid_;
  out.t = t;
  out.flat = spec_.is_flat();
  out.isotropic = true;
  if (fresh) {
    out.g00 = ScalarField(grid_, -1.0);
    out.dt_g00 = ScalarField(grid_, 0.0);
    for (int c = 0; c < 6; ++c) out.gij[c] = ScalarField(grid_, (c == XX || c == YY || c == ZZ) ? 1.0 : 0.0);
    for (auto& f : out.dk_gij) f = ScalarField(grid_, 0.0);
  }
  if (out.flat) {
    if (!fresh) {
      std::fill(out.g00.values.begin(), out.g00.values.end(), -1.0);
      std::fill(out.dt_g00.values.begin(), out.dt_g00.values.end(), 0.0);
      for (int c = 0; c < 6; ++c)
        std::fill(out.gij[c].values.begin(), out.gij[c].values.end(), (c == XX || c == YY || c == ZZ) ? 1.0 : 0.0);
      for (auto& f : out.dk_gij) std::fill(f.values.begin(), f.values.end(), 0.0);
    }
    return;
  }
  const double a = spec_.epsilon * time_factor(spec_, t, 0);
  const double da = spec_.epsilon * time_factor(spec_, t, 1);
  bool lorentzian = true;
  for (std::size_t id = 0; id < N; ++id) {
    const double h = a * profile_[id];
    out.g00[id] = -1.0 + h;
    out.dt_g00[id] = da * profile_[id];
    out.gij[XX][id] = out.gij[YY][id] = out.gij[ZZ][id] = 1.0 + h;
    for (int k = 0; k < 3; ++k) {
      const double d = a * grad_profile_[k][id];
      out.dk_gij[k * 6 + XX][id] = out.dk_gij[k * 6 + YY][id] = out.dk_gij[k * 6 + ZZ][id] = d;
    }
    lorentzian = lorentzian && (out.g00[id] < 0.0) && (1.0 + h > 0.0);
  }
  require(lorentzian, ErrorKind::NonLorentzian, "g00 >= 0 or g^{ij} not positive definite at t=" + std::to_string(t));
}

MetricSample sample_metric(const MetricSpec& spec, const Grid3& grid, double t) {
  MetricSampler sampler(spec, grid);
  MetricSample out;
  sampler.sample(t, out);
  return out;
}

double incoming_null_contraction(const MetricSpec& spec, double t, const std::array<double, 3>& x) {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  require(r > 0.0, ErrorKind::DegeneratePoint, "incoming null field is undefined at x = 0");
  const auto h = perturbation(spec, t, x);
  const double lbar[4] = {1.0, x[0] / r, x[1] / r, x[2] / r};
  double s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) s += h[a][b] * lbar[a] * lbar[b];
  return s;
}

double max_metric_derivative(const MetricSpec& spec, double t, const std::array<double, 3>& x) {
  if (spec.is_flat()) return 0.0;
  const double rho2 = spec.bump_radius * spec.bump_radius;
  Jet3 s = Jet3::constant(1.0);
  for (int k = 0; k < 3; ++k) {
    const Jet3 v = Jet3::variable(k, x[k]);
    s = s + v * v * (1.0 / rho2);
  }
  const double s0 = s.value();
  const double k = kappa(spec);
  std::array<double, Jet3::kDegree + 1> fd{};
  double falling = 1.0;
  for (int m = 0; m <= Jet3::kDegree; ++m) {
    fd[m] = falling * std::pow(s0, -k - m);
    falling *= (-k - m);
  }
  const Jet3 p = s.compose(fd);
  const int max_time_order = spec.is_static() ? 0 : Jet3::kDegree;
  double worst = 0.0;
  for (int a = 0; a <= max_time_order; ++a) {
    const double tau = time_factor(spec, t, a);
    for (const auto& J : Jet3::indices()) {
      const int order = a + J.order();
      if (order < 1 || order > Jet3::kDegree) continue;
      worst = std::max(worst, std::abs(spec.epsilon * tau * p.derivative(J.a, J.b, J.c)));
    }
  }
  return worst;
}

ValidationReport validate_assumptions(const MetricSpec& spec, std::size_t n_samples, std::uint64_t rng_seed) {
  require(n_samples >= 1000, ErrorKind::Config, "validate_assumptions needs at least 1000 samples");
  spec.validate();
  ValidationReport rep;
  rep.sample_count = n_samples;
  rep.seed = rng_seed;
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double log_rmin = std::log(rep.r_min), log_rmax = std::log(rep.r_max);
  const double eps = std::abs(spec.epsilon);
  const double d_exp = 3.0 + std::max(spec.delta, 0.0);

  auto ratio = [](double lhs, double rhs) {
    if (lhs == 0.0) return 0.0;
    return rhs > 0.0 ? lhs / rhs : kInfinity;
  };
  auto record = [](ConditionResult& c, double value, double t, const std::array<double, 3>& x) {
    if (value > c.worst_ratio) c = {value, t, x};
  };

  for (std::size_t s = 0; s < n_samples; ++s) {
    const double r = std::exp(log_rmin + (log_rmax - log_rmin) * unit(rng));
    std::array<double, 3> dir{normal(rng), normal(rng), normal(rng)};
    const double dn = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    const std::array<double, 3> x{r * dir[0] / dn, r * dir[1] / dn, r * dir[2] / dn};
    double t;
    switch (s % 3) {
      case 0: t = rep.t_max * (2.0 * unit(rng) - 1.0); break;
      case 1: t = (unit(rng) < 0.5 ? -r : r) + normal(rng); break;
      default:
        t = std::exp(std::log(1e-3) + (std::log(rep.t_max) - std::log(1e-3)) * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    }

    const auto h = perturbation(spec, t, x);
    double habs = 0.0;
    for (const auto& row : h)
      for (double v : row) habs = std::max(habs, std::abs(v));
    const double jx = japanese(r);
    const double jm = japanese(t - r), jp = japanese(t + r);

    record(rep.hyp_a, ratio(habs, eps * std::sqrt(jm) / (std::pow(jx, spec.gamma) * std::sqrt(jp))), t, x);
    record(rep.hyp_b, ratio(std::abs(incoming_null_contraction(spec, t, x)), eps * jm / (std::pow(jx, spec.gamma) * jp)), t, x);
    record(rep.hyp_c, ratio(max_metric_derivative(spec, t, x), eps * std::pow(jx, -1.0 - spec.gamma)), t, x);
    record(rep.hyp_d, ratio(habs, std::pow(jx, -d_exp)), t, x);
  }
  rep.pass = rep.hyp_a.worst_ratio <= 1.0 && rep.hyp_b.worst_ratio <= 1.0 && rep.hyp_c.worst_ratio <= 1.0 &&
             rep.hyp_d.worst_ratio <= 1.0;
  return rep;
}

}  // namespace afwl
