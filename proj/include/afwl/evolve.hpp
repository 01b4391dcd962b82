#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "afwl/grid.hpp"
#include "afwl/metric.hpp"

namespace afwl {

struct SimConfig {
  double cfl = 0.25;           // lambda in (0, 0.5]
  double t_end = 1.0;          // absolute final time
  double snapshot_dt = 0.1;
  bool nonlinear = true;
  double duhamel_tau_dt = 0.0;  // 0 selects 10 * dt
  bool keep_slices = true;      // store full slices in the trajectory
  bool allow_wrap = false;      // skip the finite-speed wrap-around precondition
  double support_radius = -1.0; // < 0: measured from the initial data

  void validate() const;
};

/// The RK4 step: cfl * dx / c_max, shrunk so snapshot_dt is an integer multiple.
struct TimeStepPlan {
  double dt = 0.0;
  std::uint64_t steps_per_snapshot = 1;
};
TimeStepPlan plan_time_step(const Grid3& grid, const MetricSpec& spec, const SimConfig& config);

struct SnapshotScalars {
  double energy = 0.0;
  double l2 = 0.0;
  double l6 = 0.0;
  double linf = 0.0;
};

struct Trajectory {
  Grid3 grid;
  MetricSpec metric;
  double dt = 0.0;
  std::vector<StateSlice> slices;  // empty when keep_slices is off
  std::vector<double> times;
  std::vector<std::uint64_t> steps;
  std::vector<SnapshotScalars> scalars;

  std::size_t size() const { return times.size(); }
  /// Index of the snapshot at time t (tolerance 1e-9 * max(1, |t|)), or npos.
  std::size_t find_time(double t) const;
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
};

/// u_tt = [u^5 - d_i(g^{ij} d_j u) - (d_t g^{00}) u_t] / g^{00}, with the
/// divergence applied to the flux g^{ij} d_j u by central differences.
ScalarField rhs(const StateSlice& state, const MetricSample& metric, bool nonlinear);

struct EvolveHooks {
  std::function<void(const StateSlice&, std::uint64_t step, const SnapshotScalars&)> on_snapshot;
  std::uint64_t checkpoint_every = 0;  // in steps; 0 disables
  std::function<void(const StateSlice&, std::uint64_t step, double dt)> on_checkpoint;
  /// Resume support: the state is taken to be at step `start_step`, and stage
  /// times are origin + k * dt. NaN origin means initial.t - start_step * dt.
  std::uint64_t start_step = 0;
  double origin = std::numeric_limits<double>::quiet_NaN();
  bool emit_initial = true;  // report the starting state as a snapshot
};

/// Classical RK4 on (u, u_t) from initial.t to config.t_end with the metric
/// resampled at every stage time. Throws InstabilityError when any field
/// norm exceeds 1e12 or turns non-finite.
Trajectory evolve(const StateSlice& initial, const MetricSpec& spec, const SimConfig& config,
                  const EvolveHooks& hooks = {});

/// S(t, s) applied to data: the linear flow (nonlinear off) from s to t with
/// the plan's dt and one shorter final step when t - s is not a multiple.
StateSlice propagate_linear(const StateSlice& data, double s, double t, const MetricSpec& spec,
                            const SimConfig& config);

enum class DuhamelMethod { Streaming, Direct };

/// Trapezoid rule in tau over [a, b] of S(t, tau)(0, F(tau)) with
/// F = u^5 / g^{00} (the source term of the first-order system; -u^5 in flat
/// space). Tau nodes are snapshot times of `source` spaced by duhamel_tau_dt
/// rounded to a whole number of snapshots. Returns one slice per eval time.
Trajectory duhamel_integral(const Trajectory& source, const MetricSpec& spec, double a, double b,
                            const std::vector<double>& eval_times, const SimConfig& config,
                            DuhamelMethod method = DuhamelMethod::Streaming);

/// Radius of the smallest origin-centred ball containing every node where
/// |u| or |u_t| exceeds 1e-10 of its maximum.
double data_support_radius(const StateSlice& s);

SnapshotScalars snapshot_scalars(const StateSlice& s, const MetricSample& metric);

}  // namespace afwl
