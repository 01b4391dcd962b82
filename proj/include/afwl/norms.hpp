#pragma once

#include <cstddef>
#include <vector>

#include "afwl/evolve.hpp"
#include "afwl/grid.hpp"
#include "afwl/metric.hpp"

namespace afwl {

/// e = -(1/(2 g00)) g^{ij} d_i u d_j u + u_t^2/2 + u^6/6.
ScalarField energy_density(const StateSlice& state, const MetricSample& metric);

/// Node sum of energy_density.
double total_energy(const StateSlice& state, const MetricSample& metric);

/// int u_t^2/2 + |grad u|^2/2 + u^6/6 (the flat energy, used by the ILED bounds).
double flat_energy(const StateSlice& state);

struct MixedNormSpec {
  double q = 8.0;
  double r = 8.0;
};

/// (int ||f(t)||_{L^r}^q dt)^{1/q} by the trapezoid rule over `times`, or
/// max_t for q = infinity. `spatial` holds ||f(t)||_{L^r} at each time.
double mixed_norm_from_series(const std::vector<double>& times, const std::vector<double>& spatial, double q);

/// L^q_t L^r_x of the u component of a list of slices.
double mixed_norm(const std::vector<StateSlice>& slices, const std::vector<double>& times, const MixedNormSpec& spec);
double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec);
/// L^q_t L^r_x of scalar fields sampled at `times`.
double mixed_norm(const std::vector<ScalarField>& fields, const std::vector<double>& times, const MixedNormSpec& spec);

/// ( int int |grad_{t,x} u|^2 / <r>^{1+gamma} + u^2 / <r>^{3+gamma}
///   [+ u^6 / <r>] dx dt )^{1/2}
double le1_norm(const Trajectory& traj, double gamma, bool include_sextic);

/// ( int int <r> |F|^2 dx dt )^{1/2}
double le_star_norm(const std::vector<ScalarField>& F, const std::vector<double>& times);

/// (LE^1^2 with the sextic term + E(T2)) / E(T1), T1 and T2 the first and
/// last snapshot. Zero data gives 0; E(T1) = 0 otherwise throws
/// ZeroInitialEnergy.
double iled_ratio(const Trajectory& traj, const MetricSpec& spec, double gamma);

struct HighOrderEnergy {
  std::vector<double> times;
  std::vector<double> energy;  // E_N(t) = sum_{|alpha|<=N} 1/2 ||grad_{t,x} d^alpha u||^2
  double ratio = 0.0;          // sup_t E_N(t) / E_N(T1)
};

/// Spatial multi-indices only, N <= 2. d_t d^alpha u is d^alpha of the stored u_t.
HighOrderEnergy high_order_energy(const Trajectory& traj, const MetricSpec& spec, int N);

struct PartitionResult {
  double t_begin = 0.0;
  double t_end = 0.0;
  std::vector<double> endpoints;  // interior cut times t_1 < ... < t_{M-1}
  std::vector<double> per_interval_l8;
  std::size_t M = 0;
  double total_l8 = 0.0;  // B
  bool verified = false;  // every interval <= 1.01 eta and M <= ceil(B^8/eta^8)
};

/// ceil(B^8 / eta^8), at least 1, with a 1e-12 relative guard against
/// round-off pushing an exact ratio up by one.
std::size_t partition_count(double B, double eta);

/// Partition from the series ||v(t)||_{L^8}^8 at `times`: F is the cumulative
/// trapezoid (piecewise linear), cuts sit where F crosses k * eta^8.
PartitionResult partition_by_l8(const std::vector<double>& times, const std::vector<double>& l8_pow8, double eta);
PartitionResult partition_by_l8(const Trajectory& linear_traj, double eta);

struct BoundInputs {
  double E = 1.0;
  double A = 1.0;
  double C = 1.0;
};

struct BoundResult {
  double value = 0.0;      // C E^{4/7} A exp(C E^{85/6} E^{13/14} A^{11})
  double log_value = 0.0;  // natural log of value
  double exponent = 0.0;   // C E^{85/6} E^{13/14} A^{11}
  double exponent_merged = 0.0;  // C E^{634/42} A^{11}
};

/// Log-space evaluation; never throws.
BoundResult theorem_log_bound(const BoundInputs& in);
/// As theorem_log_bound but throws Overflow when log_value > 700.
BoundResult theorem_bound(const BoundInputs& in);

}  // namespace afwl
