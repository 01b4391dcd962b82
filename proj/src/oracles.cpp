#include "afwl/oracles.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "afwl/error.hpp"
#include "afwl/field_ops.hpp"

namespace afwl {

namespace {

using boost::math::quadrature::gauss_kronrod;

// Adaptive 61-point Gauss-Kronrod over [a, b]; accumulates the error estimate.
template <class F>
double gk(F&& f, double a, double b, double tol, double& err) {
  if (b <= a) return 0.0;
  double e = 0.0;
  const double v = gauss_kronrod<double, 61>::integrate(f, a, b, 20, tol, &e);
  err += e;
  return v;
}

}  // namespace

KernelIntegral kernel_integral_oracle(double a, double delta, int sign) {
  require(a >= 0.0, ErrorKind::Config, "a must be non-negative");
  require(delta > 0.0 && delta <= 1.0, ErrorKind::Config, "delta must lie in (0, 1]");
  require(sign == 1 || sign == -1, ErrorKind::Config, "sign must be +1 or -1");
  KernelIntegral out;
  const double s = sign;
  auto f = [&](double tau) { return 1.0 / (japanese(tau) * std::pow(japanese(s * a + tau), 1.0 + delta)); };

  const double target_tail = 2e-9;
  const double c = std::pow(2.0, 1.0 + delta) / (1.0 + delta);
  out.cut = std::max({2.0 * a, 1.0, std::pow(c / target_tail, 1.0 / (1.0 + delta))});
  out.tail_bound = c * std::pow(out.cut, -1.0 - delta);

  // Pieces: the peak at tau = a (sign -1), then geometric intervals.
  std::vector<double> breaks{0.0};
  if (sign < 0 && a > 0.0) {
    for (double off : {-8.0, -1.0, 0.0, 1.0, 8.0})
      if (a + off > 0.0) breaks.push_back(a + off);
  }
  double edge = std::max(1.0, breaks.back());
  while (edge < out.cut) {
    edge = std::min(out.cut, std::max(edge * 2.0, edge + 1.0));
    breaks.push_back(edge);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  for (std::size_t i = 1; i < breaks.size(); ++i) out.value += gk(f, breaks[i - 1], breaks[i], 1e-12, out.quad_error);
  return out;
}

HolderTail holder_tail_oracle(double t, double t0, double T, double delta, const std::vector<double>& r_grid) {
  require(t > t0 && t0 > T && T > 0.0, ErrorKind::Config, "need t > t0 > T > 0");
  require(!r_grid.empty(), ErrorKind::Config, "r_grid must not be empty");
  HolderTail out;
  const double upper = t0 - T;
  for (double r : r_grid) {
    auto f = [&](double s) { return 1.0 / (japanese(t - s) * japanese((t - s) - r)); };
    std::vector<double> breaks{0.0};
    const double peak = t - r;
    for (double off : {-8.0, 0.0, 8.0})
      if (peak + off > 0.0 && peak + off < upper) breaks.push_back(peak + off);
    breaks.push_back(upper);
    std::sort(breaks.begin(), breaks.end());
    double err = 0.0, v = 0.0;
    for (std::size_t i = 1; i < breaks.size(); ++i) v += gk(f, breaks[i - 1], breaks[i], 1e-12, err);
    if (v > out.sup) {
      out.sup = v;
      out.argmax_r = r;
    }
  }
  out.value = out.sup * std::pow(japanese(T), 1.0 - delta);
  return out;
}

std::vector<double> default_r_grid(double t, int count) {
  std::vector<double> r(static_cast<std::size_t>(std::max(2, count)));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 2.0 * t * static_cast<double>(i) / static_cast<double>(r.size() - 1);
  return r;
}

}  // namespace afwl
