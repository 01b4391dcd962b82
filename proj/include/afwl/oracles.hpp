#pragma once

#include <vector>

namespace afwl {

struct KernelIntegral {
  double value = 0.0;       // quadrature of [0, cut]
  double tail_bound = 0.0;  // certified bound on the truncated [cut, inf) piece
  double quad_error = 0.0;  // Gauss-Kronrod error estimate
  double cut = 0.0;
};

/// I = int_0^inf <tau>^{-1} <sign a + tau>^{-1-delta} dtau to absolute
/// tolerance 1e-8. For tau >= cut >= 2a the integrand is below
/// 2^{1+delta} tau^{-2-delta}, so the dropped tail is at most
/// 2^{1+delta} cut^{-1-delta} / (1 + delta).
KernelIntegral kernel_integral_oracle(double a, double delta, int sign);

struct HolderTail {
  double value = 0.0;  // sup_r integral * <T>^{1-delta}
  double sup = 0.0;
  double argmax_r = 0.0;
};

/// sup over r in r_grid of int_0^{t0-T} ds / (<t-s> <(t-s)-r>).
HolderTail holder_tail_oracle(double t, double t0, double T, double delta, const std::vector<double>& r_grid);

/// `count` evenly spaced radii covering [0, 2t].
std::vector<double> default_r_grid(double t, int count = 2001);

}  // namespace afwl
