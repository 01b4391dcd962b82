#include "afwl/morawetz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "afwl/error.hpp"
#include "afwl/fft.hpp"
#include "afwl/field_ops.hpp"
#include "afwl/norms.hpp"

namespace afwl {

double cutoff_profile(double s) {
  const double a = std::abs(s);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double tau = a - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - tau * tau));
}

double cutoff_profile_derivative(double s) {
  const double a = std::abs(s);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  const double tau = a - 1.0;
  const double q = 1.0 - tau * tau;
  const double d = cutoff_profile(a) * (-2.0 * tau / (q * q));
  return s < 0.0 ? -d : d;
}

double cutoff(const std::array<double, 3>& z, double R) {
  require(R > 0.0, ErrorKind::Config, "cutoff radius must be positive");
  return cutoff_profile(std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]) / R);
}

void MorawetzConfig::validate(const Grid3& grid) const {
  require(R0 >= 2.0 * grid.dx, ErrorKind::Config, "morawetz.R0 must be at least 2 dx");
  require(J >= 1.0, ErrorKind::Config, "morawetz.J must be >= 1");
  require(std::exp(J) * R0 <= grid.half_extent(), ErrorKind::Config, "e^J R0 must not exceed half_extent");
  require(R > 0.0 && T > 0.0 && W >= 0.0, ErrorKind::Config, "morawetz R and T must be positive, W >= 0");
  require(nodes_per_efold >= 8, ErrorKind::Config, "at least 8 R-nodes per e-fold are required");
}

namespace {

using Spectrum = std::vector<std::complex<double>>;

// Zero-padded correlation engine on an m = 2n cube.
class Correlator {
 public:
  explicit Correlator(const Grid3& g) : n_(g.n), m_(2 * g.n), fft_(m_), buf_(fft_.real_size(), 0.0) {}

  std::size_t bins() const { return static_cast<std::size_t>(3 * (n_ - 1) * (n_ - 1) + 1); }

  Spectrum transform(const ScalarField& f) {
    std::fill(buf_.begin(), buf_.end(), 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) buf_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k] = f.at(i, j, k);
    Spectrum s(fft_.spectrum_size());
    fft_.forward(buf_.data(), s.data());
    return s;
  }

  // Inverse-transforms `spec` (a sum of conj(A) B products) and accumulates
  // weight(d) * C(d) into bins[|d|^2].
  template <class Weight>
  void accumulate(const Spectrum& spec, std::vector<double>& bins, Weight&& weight) {
    fft_.inverse(spec.data(), buf_.data());
    for (int a = 0; a < m_; ++a) {
      const int da = a < n_ ? a : a - m_;
      if (da <= -n_) continue;
      for (int b = 0; b < m_; ++b) {
        const int db = b < n_ ? b : b - m_;
        if (db <= -n_) continue;
        const std::size_t row = (static_cast<std::size_t>(a) * m_ + b) * m_;
        for (int c = 0; c < m_; ++c) {
          const int dc = c < n_ ? c : c - m_;
          if (dc <= -n_) continue;
          const int d2 = da * da + db * db + dc * dc;
          bins[static_cast<std::size_t>(d2)] += weight(da, db, dc) * buf_[row + c];
        }
      }
    }
  }

 private:
  int n_, m_;
  RealFFT3 fft_;
  std::vector<double> buf_;
};

// out = sum_terms coef * conj(A) * B
Spectrum cross(const Spectrum& A, const Spectrum& B) {
  Spectrum out(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) out[i] = std::conj(A[i]) * B[i];
  return out;
}

void add_cross(Spectrum& out, const Spectrum& A, const Spectrum& B, double coef) {
  for (std::size_t i = 0; i < A.size(); ++i) out[i] += coef * std::conj(A[i]) * B[i];
}

template <class Radial>
double evaluate_bins(const std::vector<double>& bins, double dx, Radial&& radial) {
  double s = 0.0;
  for (std::size_t m = 0; m < bins.size(); ++m) {
    if (bins[m] == 0.0) continue;
    s += radial(std::sqrt(static_cast<double>(m)) * dx) * bins[m];
  }
  return s;
}

void check_radius(double R, double half_extent) {
  require(R > 0.0, ErrorKind::Config, "Morawetz radius must be positive");
  require(R <= half_extent, ErrorKind::KernelTooLarge,
          "R = " + std::to_string(R) + " exceeds half_extent " + std::to_string(half_extent));
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace

double MorawetzSnapshot::potential_at(double R) const {
  check_radius(R, half_extent);
  return evaluate_bins(potential, dx, [R](double rho) { return cutoff_profile(rho / R); });
}

double MorawetzSnapshot::principal_at(double R) const {
  check_radius(R, half_extent);
  return evaluate_bins(principal, dx, [R](double rho) { return cutoff_profile(rho / R); });
}

double MorawetzSnapshot::positive_at(double R) const {
  check_radius(R, half_extent);
  return evaluate_bins(positive, dx, [R](double rho) { return cutoff_profile(rho / R); });
}

double MorawetzSnapshot::boundary_at(double R) const {
  check_radius(R, half_extent);
  // (d_j phi_R)(z) = phi'(|z|/R) z_j / (|z| R); the z_j factors live in the bins.
  return evaluate_bins(boundary, dx, [R](double rho) {
    return rho > 0.0 ? cutoff_profile_derivative(rho / R) / (rho * R) : 0.0;
  });
}

MorawetzSnapshot morawetz_snapshot(const StateSlice& state, const MetricSample& metric) {
  const Grid3& g = state.grid();
  const std::size_t N = g.size();
  const double dx = g.dx;
  MorawetzSnapshot snap;
  snap.t = state.t;
  snap.dx = dx;
  snap.half_extent = g.half_extent();

  const ScalarField e = energy_density(state, metric);
  snap.energy = integrate(e);
  const Vector3Field du = gradient(state.u);
  Vector3Field p{ScalarField(g), ScalarField(g), ScalarField(g)};
  ScalarField q(g), ell(g), w(g), wpos(g);
  for (std::size_t id = 0; id < N; ++id) {
    const double u = state.u[id], v = state.ut[id];
    const double g2 = du[0][id] * du[0][id] + du[1][id] * du[1][id] + du[2][id] * du[2][id];
    const double u6 = u * u * u * u * u * u;
    for (int k = 0; k < 3; ++k) p[k][id] = v * du[k][id];
    q[id] = v * u;
    ell[id] = 0.5 * g2 - 0.5 * v * v + u6 / 6.0;
    w[id] = 0.5 * (g2 + v * v + u6);
    const double gap = std::abs(v) - std::sqrt(g2);
    wpos[id] = 0.5 * gap * gap + u6 / 6.0;
  }

  Correlator corr(g);
  const std::size_t B = corr.bins();
  snap.potential.assign(B, 0.0);
  snap.principal.assign(B, 0.0);
  snap.boundary.assign(B, 0.0);
  snap.positive.assign(B, 0.0);

  const Spectrum E = corr.transform(e);
  const Spectrum Q = corr.transform(q);
  const std::array<Spectrum, 3> P{corr.transform(p[0]), corr.transform(p[1]), corr.transform(p[2])};
  auto one = [](int, int, int) { return 1.0; };

  // Potential: e(y) q(x) + e(y) (x - y)_k p_k(x).
  corr.accumulate(cross(E, Q), snap.potential, one);
  for (int k = 0; k < 3; ++k)
    corr.accumulate(cross(E, P[k]), snap.potential, [k, dx](int a, int b, int c) {
      const int d[3] = {a, b, c};
      return dx * d[k];
    });

  // Principal: p(y).p(x) - e(y) w(x).
  {
    Spectrum s = cross(E, corr.transform(w));
    for (auto& z : s) z = -z;
    for (int k = 0; k < 3; ++k) add_cross(s, P[k], P[k], 1.0);
    corr.accumulate(s, snap.principal, one);
  }

  // Boundary, quadratic in z: z_j z_k [p_j(y) p_k(x) - e(y) sigma_jk(x)],
  // sigma_jk = d_j u d_k u - delta_jk ell.
  for (int j = 0; j < 3; ++j)
    for (int k = j; k < 3; ++k) {
      ScalarField sigma(g);
      for (std::size_t id = 0; id < N; ++id) sigma[id] = du[j][id] * du[k][id] - (j == k ? ell[id] : 0.0);
      const double mult = j == k ? 1.0 : 2.0;
      Spectrum s = cross(E, corr.transform(sigma));
      for (auto& z : s) z *= -mult;
      if (j == k) {
        add_cross(s, P[j], P[k], 1.0);
      } else {
        add_cross(s, P[j], P[k], 1.0);
        add_cross(s, P[k], P[j], 1.0);
      }
      corr.accumulate(s, snap.boundary, [j, k, dx](int a, int b, int c) {
        const int d[3] = {a, b, c};
        return dx * dx * d[j] * d[k];
      });
    }

  // Boundary, linear in z: z_j [p_j(y) q(x) - e(y) (u d_j u)(x)].
  for (int j = 0; j < 3; ++j) {
    ScalarField s_j(g);
    for (std::size_t id = 0; id < N; ++id) s_j[id] = state.u[id] * du[j][id];
    Spectrum s = cross(E, corr.transform(s_j));
    for (auto& z : s) z = -z;
    add_cross(s, P[j], Q, 1.0);
    corr.accumulate(s, snap.boundary, [j, dx](int a, int b, int c) {
      const int d[3] = {a, b, c};
      return dx * d[j];
    });
  }

  corr.accumulate(cross(E, corr.transform(wpos)), snap.positive, one);

  // Unnormalised inverse FFT carries m^3; each double integral carries dx^6.
  const double m = 2.0 * g.n;
  const double scale = std::pow(dx, 6) / (m * m * m);
  for (auto* v : {&snap.potential, &snap.principal, &snap.boundary, &snap.positive})
    for (double& x : *v) x *= scale;
  return snap;
}

double morawetz_potential(const StateSlice& state, const MetricSample& metric, double R) {
  check_radius(R, state.grid().half_extent());
  return morawetz_snapshot(state, metric).potential_at(R);
}

double main_density(const StateSlice& state, const MetricSample& metric, double R) {
  check_radius(R, state.grid().half_extent());
  return std::max(0.0, morawetz_snapshot(state, metric).positive_at(R));
}

double MorawetzLedger::residual_integral() const {
  std::vector<double> a(residual.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(residual[i]);
  return trapezoid(times, a);
}

MorawetzLedger ledger(const std::vector<MorawetzSnapshot>& snaps, double R) {
  MorawetzLedger L;
  L.R = R;
  const std::size_t n = snaps.size();
  for (const auto& s : snaps) {
    L.times.push_back(s.t);
    L.M_R.push_back(s.potential_at(R));
    L.main_density.push_back(s.principal_at(R));
    L.boundary.push_back(s.boundary_at(R));
    L.positive_density.push_back(std::max(0.0, s.positive_at(R)));
    L.energy.push_back(s.energy);
  }
  L.dM_numeric.assign(n, 0.0);
  if (n >= 3) {
    for (std::size_t i = 1; i + 1 < n; ++i)
      L.dM_numeric[i] = (L.M_R[i + 1] - L.M_R[i - 1]) / (L.times[i + 1] - L.times[i - 1]);
    const double h0 = L.times[1] - L.times[0];
    const double h1 = L.times[n - 1] - L.times[n - 2];
    L.dM_numeric[0] = (-3.0 * L.M_R[0] + 4.0 * L.M_R[1] - L.M_R[2]) / (2.0 * h0);
    L.dM_numeric[n - 1] = (3.0 * L.M_R[n - 1] - 4.0 * L.M_R[n - 2] + L.M_R[n - 3]) / (2.0 * h1);
  } else if (n == 2) {
    L.dM_numeric[0] = L.dM_numeric[1] = (L.M_R[1] - L.M_R[0]) / (L.times[1] - L.times[0]);
  }
  L.residual.resize(n);
  for (std::size_t i = 0; i < n; ++i) L.residual[i] = L.dM_numeric[i] - L.main_density[i] - L.boundary[i];
  return L;
}

namespace {

std::vector<MorawetzSnapshot> snapshots_of(const Trajectory& traj, const MetricSpec& spec) {
  require(!traj.slices.empty(), ErrorKind::Config, "trajectory has no stored slices");
  MetricSampler sampler(spec, traj.grid);
  MetricSample metric;
  std::vector<MorawetzSnapshot> snaps;
  for (const auto& s : traj.slices) {
    sampler.sample(s.t, metric);
    snaps.push_back(morawetz_snapshot(s, metric));
  }
  return snaps;
}

}  // namespace

MorawetzLedger ledger(const Trajectory& traj, const MetricSpec& spec, double R) {
  check_radius(R, traj.grid.half_extent());
  return ledger(snapshots_of(traj, spec), R);
}

double potential_bound(const MorawetzLedger& L, double E, double R) {
  double worst = 0.0;
  for (double m : L.M_R) worst = std::max(worst, std::abs(m));
  if (worst == 0.0) return 0.0;
  require(E > 0.0 && R > 0.0, ErrorKind::Config, "potential_bound needs E > 0 and R > 0");
  return worst / (E * E * R);
}

AveragedMorawetz averaged_morawetz(const std::vector<MorawetzSnapshot>& snaps, const MorawetzConfig& config) {
  require(config.J >= 1.0 && config.R0 > 0.0, ErrorKind::Config, "averaging needs J >= 1 and R0 > 0");
  require(config.nodes_per_efold >= 8, ErrorKind::Config, "at least 8 R-nodes per e-fold are required");
  require(snaps.size() >= 2, ErrorKind::Config, "averaged Morawetz needs at least two snapshots");
  AveragedMorawetz out;
  out.script_T = std::exp(config.J) * config.R0;
  const double duration = snaps.back().t - snaps.front().t;
  require(duration >= out.script_T * (1.0 - 1e-12), ErrorKind::DurationTooShort,
          "trajectory duration " + std::to_string(duration) + " is shorter than e^J R0 = " +
              std::to_string(out.script_T));
  out.E = snaps.front().energy;

  // int_{R0}^{e^J R0} f(R) dR/R = int_0^J f(R0 e^s) ds.
  const int K = std::max(1, static_cast<int>(std::ceil(config.J * config.nodes_per_efold)));
  const double hs = config.J / K;
  std::vector<double> times, inner;
  for (const auto& snap : snaps) {
    double acc = 0.0;
    for (int k = 0; k <= K; ++k) {
      const double wk = (k == 0 || k == K) ? 0.5 : 1.0;
      acc += wk * std::max(0.0, snap.positive_at(config.R0 * std::exp(k * hs)));
    }
    times.push_back(snap.t);
    inner.push_back(acc * hs);
  }
  out.lhs = trapezoid(times, inner) / config.J;
  out.rhs_fit = out.E > 0.0 ? out.lhs * config.J / (out.script_T * out.E * out.E) : 0.0;
  return out;
}

AveragedMorawetz averaged_morawetz(const Trajectory& traj, const MetricSpec& spec, const MorawetzConfig& config) {
  config.validate(traj.grid);
  require(traj.size() >= 2 && traj.times.back() - traj.times.front() >= std::exp(config.J) * config.R0 * (1.0 - 1e-12),
          ErrorKind::DurationTooShort, "trajectory is shorter than e^J R0");
  return averaged_morawetz(snapshots_of(traj, spec), config);
}

QuietTimeResult quiet_time_search(const Trajectory& traj, const MetricSpec& spec, double I_begin, double I_end,
                                  const MorawetzConfig& mc, const SimConfig& sim) {
  require(!traj.slices.empty(), ErrorKind::Config, "quiet_time_search needs stored slices");
  require(I_begin >= traj.times.front() - 1e-12 && I_end <= traj.times.back() + 1e-12, ErrorKind::Config,
          "interval must lie inside the trajectory");
  require(I_end - I_begin > mc.T, ErrorKind::Config, "interval must be longer than T");
  const double h = traj.times.size() >= 2 ? traj.times[1] - traj.times[0] : sim.snapshot_dt;
  const double stride_raw = mc.stride > 0.0 ? mc.stride : std::max(h, mc.T / 10.0);
  const double stride = h * std::max(1.0, std::round(stride_raw / h));
  const double T = h * std::max(1.0, std::round(mc.T / h));
  const int n_eval = std::max(1, static_cast<int>(std::round(mc.W / h)));

  QuietTimeResult res;
  bool first = true;
  for (double t0 = I_begin; t0 <= I_end + 1e-9; t0 += stride) {
    const std::size_t i0 = traj.find_time(t0);
    if (i0 == Trajectory::npos) continue;
    const double tc = traj.times[i0];
    if (tc - T < traj.times.front() - 1e-9) continue;
    std::vector<double> evals;
    for (int k = 0; k <= n_eval; ++k) evals.push_back(tc + k * h);
    const Trajectory N = duhamel_integral(traj, spec, traj.times[traj.find_time(tc - T)], tc, evals, sim);
    std::vector<double> l8(N.slices.size());
    for (std::size_t k = 0; k < l8.size(); ++k) l8[k] = lebesgue_norm(N.slices[k].u, 8.0);
    const double value = evals.size() >= 2 ? mixed_norm_from_series(evals, l8, 8.0) : l8.front();
    res.candidates.push_back({tc, value});
    if (first || value < res.duhamel_l8) {
      res.t0 = tc;
      res.duhamel_l8 = value;
      first = false;
    }
  }
  require(!res.candidates.empty(), ErrorKind::Config, "no quiet-time candidate fits inside the trajectory");
  return res;
}

}  // namespace afwl
