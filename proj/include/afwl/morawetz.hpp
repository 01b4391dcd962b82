#pragma once

#include <array>
#include <vector>

#include "afwl/evolve.hpp"
#include "afwl/grid.hpp"
#include "afwl/metric.hpp"

namespace afwl {

/// phi(s) = 1 for |s| <= 1, 0 for |s| >= 2 and exp(1 - 1/(1 - tau^2)) with
/// tau = |s| - 1 in between.
double cutoff_profile(double s);
double cutoff_profile_derivative(double s);
/// phi(z / R).
double cutoff(const std::array<double, 3>& z, double R);

struct MorawetzConfig {
  double R = 4.0;
  double R0 = 0.5;
  double J = 2.0;
  double T = 2.0;         // recent-past window for the quiet-time search
  double W = 2.0;         // evaluation window after each candidate t0
  double stride = 0.0;    // candidate spacing; 0 selects max(snapshot_dt, T/10)
  int nodes_per_efold = 16;

  void validate(const Grid3& grid) const;
};

/// Correlations of one snapshot, binned by the integer |d|^2 of the node
/// offset d = x - y, so the functionals can be evaluated for any R cheaply.
/// Double integrals are computed as zero-padded (2n)^3 FFT correlations
/// C_ab(d) = sum_y a(y) b(y + d), which are exact linear (non-periodic) sums.
struct MorawetzSnapshot {
  double t = 0.0;
  double dx = 1.0;
  double half_extent = 0.0;
  double energy = 0.0;              // int e dx
  std::vector<double> potential;    // e(y) [(x-y).u_t grad u + u_t u](x)
  std::vector<double> principal;    // p(y).p(x) - e(y) w(x), w = (|grad u|^2 + u_t^2 + u^6)/2
  std::vector<double> boundary;     // kernel d_j phi_R weights, see morawetz.cpp
  std::vector<double> positive;     // e(y) [(|u_t| - |grad u|)^2/2 + u^6/6](x)

  double potential_at(double R) const;
  double principal_at(double R) const;
  double boundary_at(double R) const;
  double positive_at(double R) const;
};

MorawetzSnapshot morawetz_snapshot(const StateSlice& state, const MetricSample& metric);

/// M_R(t) = int int e(y) phi((x-y)/R) [(x-y) . u_t grad u (x) + u_t u (x)] dx dy.
/// Throws KernelTooLarge if R > half_extent.
double morawetz_potential(const StateSlice& state, const MetricSample& metric, double R);

/// int int e(y) phi((x-y)/R) [(|u_t| - |grad u|)^2/2 + u^6/6](x) dx dy >= 0.
double main_density(const StateSlice& state, const MetricSample& metric, double R);

struct MorawetzLedger {
  double R = 0.0;
  std::vector<double> times;
  std::vector<double> M_R;
  std::vector<double> dM_numeric;    // centered differences, one-sided 2nd order at the ends
  std::vector<double> main_density;  // flat principal part of dM/dt
  std::vector<double> boundary;      // terms carrying phi', supported on R <= |x-y| <= 2R
  std::vector<double> residual;      // dM_numeric - main_density - boundary
  std::vector<double> positive_density;  // the positive main density of the averaged inequality
  std::vector<double> energy;

  /// Trapezoid integral of |residual| over time.
  double residual_integral() const;
};

MorawetzLedger ledger(const std::vector<MorawetzSnapshot>& snaps, double R);
MorawetzLedger ledger(const Trajectory& traj, const MetricSpec& spec, double R);

/// max_t |M_R(t)| / (E^2 R).
double potential_bound(const MorawetzLedger& ledger, double E, double R);

struct AveragedMorawetz {
  double lhs = 0.0;
  double rhs_fit = 0.0;  // lhs * J / (script_T * E^2)
  double script_T = 0.0; // e^J R0
  double E = 0.0;
};

/// (1/J) int_t int_{R0}^{e^J R0} positive(t, R) dR/R dt with log-spaced R
/// nodes. Throws DurationTooShort if the trajectory is shorter than e^J R0.
AveragedMorawetz averaged_morawetz(const std::vector<MorawetzSnapshot>& snaps, const MorawetzConfig& config);
AveragedMorawetz averaged_morawetz(const Trajectory& traj, const MetricSpec& spec, const MorawetzConfig& config);

struct QuietCandidate {
  double t0 = 0.0;
  double duhamel_l8 = 0.0;
};

struct QuietTimeResult {
  double t0 = 0.0;
  double duhamel_l8 = 0.0;
  std::vector<QuietCandidate> candidates;
};

/// For each candidate t0 in [I_begin, I_end] (stride grid, t0 - T inside the
/// trajectory), the L^8_{t,x} norm over [t0, t0 + W] of
/// int_{t0-T}^{t0} S(t, tau)(0, u^5) dtau. Returns the minimiser.
QuietTimeResult quiet_time_search(const Trajectory& traj, const MetricSpec& spec, double I_begin, double I_end,
                                  const MorawetzConfig& mconfig, const SimConfig& sim);

}  // namespace afwl
