#pragma once

#include <cstdint>
#include <vector>

#include "afwl/evolve.hpp"
#include "afwl/grid.hpp"
#include "afwl/metric.hpp"

namespace afwl {

/// value(t) ~ c <t - s>^p, fitted by least squares on (log <t - s>, log value).
struct DecayFit {
  std::vector<double> times;
  std::vector<double> values;
  double s = 0.0;
  double p = 0.0;
  double c = 0.0;
  double residual = 0.0;  // RMS of the log-log fit
};

DecayFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values, double s);

/// Sup over all components of the order-k derivative:
///   k = 0: |u|; k = 1: |u_t|, |d_i u|; k = 2: |d_i d_j u|, |d_i u_t|, |u_tt|
/// with u_tt from rhs(). `mask`, when non-empty, restricts the sup to nodes
/// where mask[id] != 0.
double derivative_sup(const StateSlice& s, const MetricSample& metric, int k, const std::vector<char>& mask = {});

/// Propagates `data` (given at time s) linearly through the sorted dyadic
/// times and fits the decay of ||d^k S(t, s)(f, g)||_inf.
DecayFit dispersive_decay_fit(const StateSlice& data, const MetricSpec& spec, double s,
                              const std::vector<double>& dyadic_ts, int k, const SimConfig& config);

struct InteriorDecay {
  DecayFit cone;    // sup over |x| <= t/2
  DecayFit origin;  // value at the node nearest x = 0
};

InteriorDecay interior_decay_experiment(const StateSlice& data, const MetricSpec& spec,
                                        const std::vector<double>& dyadic_ts, const SimConfig& config);

struct RemotePast {
  double l_inf = 0.0;
  double l4 = 0.0;
  double l8 = 0.0;
  double holder_rhs = 0.0;  // sqrt(l_inf * l4)
  bool holds = true;        // l8 <= holder_rhs (1e-12 relative slack)
};

/// N_far = int_0^{t0 - T} S(t, tau)(0, u^5) dtau on [t0, t0 + W] and its
/// L^inf, L^4 and L^8 space-time norms.
RemotePast remote_past_term(const Trajectory& traj, const MetricSpec& spec, double t0, double T, double W,
                            const SimConfig& config);

/// max over sampled (tau, y) of |d_a(h^{ab} d_b phi)| <tau - s> <y>^{3+delta}
/// with analytic h-derivatives and grid derivatives of phi.
double source_decay_check(const Trajectory& linear_traj, const MetricSpec& spec, double s, std::size_t n_samples,
                          std::uint64_t seed);

struct DataNorms {
  double sobolev = 0.0;  // ||f||_{H^5} + ||g||_{H^4} (inhomogeneous)
  double w41 = 0.0;      // sum_{|a|<=4} ||d^a f||_1 + sum_{|a|<=3} ||d^a g||_1
};

DataNorms data_norms(const StateSlice& data);

}  // namespace afwl
