#pragma once

#include <cmath>
#include <limits>

#include "afwl/grid.hpp"

namespace afwl {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline double japanese(double r) { return std::sqrt(1.0 + r * r); }

/// Central difference (f[k+1] - f[k-1]) / (2 dx) along axis 0..2, periodic.
ScalarField derivative(const ScalarField& f, int axis);

/// Second-order central gradient with periodic wrap.
Vector3Field gradient(const ScalarField& f);

/// Sum of central differences of the components; adjoint of -gradient.
ScalarField divergence(const Vector3Field& v);

/// divergence(gradient(f)), the wide 5-point-per-axis Laplacian.
ScalarField wide_laplacian(const ScalarField& f);

/// Node-sum rule: (sum |f|^p dx^3)^(1/p), or max |f| for p = infinity.
double lebesgue_norm(const ScalarField& f, double p);

/// Deterministic sum of g(index) over all nodes, times dx^3.
double integrate(const ScalarField& f);

double mean(const ScalarField& f);

/// Homogeneous Sobolev norm || |xi|^s f^ ||_2 from the discrete Fourier
/// transform with xi = 2 pi k / (n dx). The zero mode is dropped, which is the
/// same as removing the mean first. Requires -1 <= s <= 5.
double sobolev_norm(const ScalarField& f, double s);

/// Omega_a f = (x cross grad f)_a for axis a in 1..3.
ScalarField rotation_derivative(const ScalarField& f, int axis);

/// (x/|x|) . grad f, zero at the origin node.
ScalarField radial_derivative(const ScalarField& f);

struct AnnulusNorms {
  double sup_on_annulus = 0.0;
  double sum_l2_terms = 0.0;
  /// sup * R / sum_l2_terms, the constant in the annulus Sobolev inequality.
  double fitted_constant = 0.0;
};

/// sup |f| over R < |x| < R+1 and the sum over j <= 1 and all words of length
/// <= 2 in Omega_1..3 of ||d_r^j Omega^alpha f||_2 over R-1 < |x| < R+2.
/// Throws AnnulusOutOfDomain unless R + 2 < half_extent.
AnnulusNorms annulus_norms(const ScalarField& f, double R);

/// |x| at node (i, j, k).
inline double node_radius(const Grid3& g, int i, int j, int k) {
  const double x = g.coord(i), y = g.coord(j), z = g.coord(k);
  return std::sqrt(x * x + y * y + z * z);
}

}  // namespace afwl
