#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "afwl/grid.hpp"

namespace afwl {

enum class MetricFamily { Flat, StaticBump, TimeModulatedBump };

std::string to_string(MetricFamily f);
MetricFamily parse_metric_family(const std::string& s);

/// g^{ab} = m^{ab} + h^{ab} with h^{0j} = 0 and, for the bump families,
///   h^{00} = h^{ii} = eps * tau(t) * (1 + r^2/rho^2)^{-(3+delta)/2}
/// where tau = 1 (static) or (1 + cos(omega t))/2 (modulated).
struct MetricSpec {
  MetricFamily family = MetricFamily::Flat;
  double epsilon = 0.05;
  double gamma = 0.5;
  double delta = 0.1;
  double bump_radius = 2.0;
  double modulation_freq = 0.5;

  /// Throws Config for values outside the supported ranges.
  void validate() const;
  bool is_flat() const { return family == MetricFamily::Flat || epsilon == 0.0; }
  bool is_static() const { return family != MetricFamily::TimeModulatedBump; }
};

/// Spatial profile (1 + r^2/rho^2)^{-(3+delta)/2}; equals 1 at the origin.
double bump_profile(const MetricSpec& spec, double r2);

/// d^a/dt^a of the time factor tau(t).
double time_factor(const MetricSpec& spec, double t, int order = 0);

/// h^{ab}(t, x) as a 4x4 matrix, index 0 = time.
std::array<std::array<double, 4>, 4> perturbation(const MetricSpec& spec, double t, const std::array<double, 3>& x);

/// Largest sqrt(eig(g^{ij}) / |g^{00}|) over all (t, x); used for the CFL step.
double max_wave_speed(const MetricSpec& spec);

/// Component order for the symmetric spatial block.
enum SymIndex { XX = 0, XY, XZ, YY, YZ, ZZ };
inline int sym_index(int i, int j) {
  static constexpr int table[3][3] = {{XX, XY, XZ}, {XY, YY, YZ}, {XZ, YZ, ZZ}};
  return table[i][j];
}

/// Metric coefficients sampled on a grid at one time. dk_gij[k * 6 + c] holds
/// d_k of component c.
struct MetricSample {
  Grid3 grid;
  double t = 0.0;
  bool flat = false;
  bool isotropic = false;  // g^{ij} = a(x) delta^{ij}
  ScalarField g00;
  ScalarField dt_g00;
  std::array<ScalarField, 6> gij;
  std::array<ScalarField, 18> dk_gij;
};

/// Closed-form evaluation with analytic first derivatives. Throws
/// NonLorentzian if g00 >= 0 or g^{ij} fails to be positive definite.
MetricSample sample_metric(const MetricSpec& spec, const Grid3& grid, double t);

/// Caches the spatial profile so that time-dependent sampling only rescales.
class MetricSampler {
 public:
  MetricSampler(const MetricSpec& spec, const Grid3& grid);
  /// Overwrites `out` with the sample at time t (allocating on first use).
  void sample(double t, MetricSample& out) const;
  const MetricSpec& spec() const { return spec_; }

 private:
  MetricSpec spec_;
  Grid3 grid_;
  ScalarField profile_;
  std::array<ScalarField, 3> grad_profile_;
};

/// h^{ab} Lbar_a Lbar_b with Lbar_a = (1, x/|x|) (index lowered by the
/// Minkowski metric). Throws DegeneratePoint at x = 0.
double incoming_null_contraction(const MetricSpec& spec, double t, const std::array<double, 3>& x);

struct ConditionResult {
  double worst_ratio = 0.0;
  double t = 0.0;
  std::array<double, 3> x{0.0, 0.0, 0.0};
};

struct ValidationReport {
  ConditionResult hyp_a, hyp_b, hyp_c, hyp_d;
  std::size_t sample_count = 0;
  double r_min = 1e-3, r_max = 1e3, t_max = 1e3;
  std::uint64_t seed = 0;
  bool pass = false;
};

/// Samples (t, x) with |x| log-uniform in [1e-3, 1e3] and t drawn from a
/// mixture of uniform on [-1e3, 1e3], near the light cone t = +-|x|, and
/// log-uniform |t|. Every sample is checked against all four conditions; the
/// derivative bound covers every space-time multi-index 1 <= |J| <= 5.
ValidationReport validate_assumptions(const MetricSpec& spec, std::size_t n_samples, std::uint64_t rng_seed);

/// max over 1 <= |J| <= 5 of |d^J h^{mu nu}(t, x)|, J ranging over (t, x).
double max_metric_derivative(const MetricSpec& spec, double t, const std::array<double, 3>& x);

}  // namespace afwl
