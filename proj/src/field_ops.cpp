#include "afwl/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "afwl/error.hpp"
#include "afwl/fft.hpp"
#include "afwl/parallel.hpp"

namespace afwl {

ScalarField derivative(const ScalarField& f, int axis) {
  const Grid3& g = f.grid;
  const int n = g.n;
  const double c = 0.5 / g.dx;
  ScalarField out(g);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
    for (int i = static_cast<int>(b); i < static_cast<int>(e); ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double plus, minus;
          if (axis == 0) {
            plus = f.at(g.wrap(i + 1), j, k);
            minus = f.at(g.wrap(i - 1), j, k);
          } else if (axis == 1) {
            plus = f.at(i, g.wrap(j + 1), k);
            minus = f.at(i, g.wrap(j - 1), k);
          } else {
            plus = f.at(i, j, g.wrap(k + 1));
            minus = f.at(i, j, g.wrap(k - 1));
          }
          out.at(i, j, k) = c * (plus - minus);
        }
  });
  return out;
}

Vector3Field gradient(const ScalarField& f) {
  return {derivative(f, 0), derivative(f, 1), derivative(f, 2)};
}

ScalarField divergence(const Vector3Field& v) {
  ScalarField out = derivative(v[0], 0);
  for (int a = 1; a < 3; ++a) {
    ScalarField d = derivative(v[a], a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  return out;
}

ScalarField wide_laplacian(const ScalarField& f) {
  const Grid3& g = f.grid;
  const int n = g.n;
  const double c = 0.25 / (g.dx * g.dx);
  ScalarField out(g);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
    for (int i = static_cast<int>(b); i < static_cast<int>(e); ++i) {
      const int ip = g.wrap(i + 2), im = g.wrap(i - 2);
      for (int j = 0; j < n; ++j) {
        const int jp = g.wrap(j + 2), jm = g.wrap(j - 2);
        for (int k = 0; k < n; ++k) {
          const int kp = g.wrap(k + 2), km = g.wrap(k - 2);
          const double f0 = f.at(i, j, k);
          out.at(i, j, k) = c * (f.at(ip, j, k) + f.at(im, j, k) + f.at(i, jp, k) + f.at(i, jm, k) +
                                 f.at(i, j, kp) + f.at(i, j, km) - 6.0 * f0);
        }
      }
    }
  });
  return out;
}

namespace {

// Per-x-plane partial sums, combined in plane order.
template <class Term>
double plane_sum(const Grid3& g, Term&& term) {
  const std::size_t plane = static_cast<std::size_t>(g.n) * g.n;
  return ordered_sum(static_cast<std::size_t>(g.n), [&](std::size_t i) {
    double s = 0.0;
    const std::size_t base = i * plane;
    for (std::size_t q = 0; q < plane; ++q) s += term(base + q);
    return s;
  });
}

}  // namespace

double integrate(const ScalarField& f) {
  return plane_sum(f.grid, [&](std::size_t q) { return f[q]; }) * f.grid.cell_volume();
}

double mean(const ScalarField& f) {
  return plane_sum(f.grid, [&](std::size_t q) { return f[q]; }) / static_cast<double>(f.size());
}

double lebesgue_norm(const ScalarField& f, double p) {
  const Grid3& g = f.grid;
  if (std::isinf(p)) {
    const std::size_t plane = static_cast<std::size_t>(g.n) * g.n;
    return ordered_max(static_cast<std::size_t>(g.n), [&](std::size_t i) {
      double m = 0.0;
      for (std::size_t q = i * plane; q < (i + 1) * plane; ++q) m = std::max(m, std::abs(f[q]));
      return m;
    });
  }
  require(p >= 1.0, ErrorKind::Config, "lebesgue exponent must be >= 1");
  double s;
  if (p == 2.0) {
    s = plane_sum(g, [&](std::size_t q) { return f[q] * f[q]; });
  } else {
    s = plane_sum(g, [&](std::size_t q) { return std::pow(std::abs(f[q]), p); });
  }
  return std::pow(s * g.cell_volume(), 1.0 / p);
}

double sobolev_norm(const ScalarField& f, double s) {
  require(s >= -1.0 && s <= 5.0, ErrorKind::Config, "sobolev order must lie in [-1, 5]");
  const Grid3& g = f.grid;
  const int n = g.n;
  RealFFT3 fft(n);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(f.values.data(), spec.data());
  const int nh = n / 2 + 1;
  const double dk = 2.0 * M_PI / (n * g.dx);
  const double total = ordered_sum(static_cast<std::size_t>(n), [&](std::size_t a) {
    double acc = 0.0;
    const int ka = signed_frequency(static_cast<int>(a), n);
    for (int b = 0; b < n; ++b) {
      const int kb = signed_frequency(b, n);
      for (int c = 0; c < nh; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const double k2 = dk * dk * (double(ka) * ka + double(kb) * kb + double(c) * c);
        // Hermitian symmetry: interior modes of the halved axis stand for two.
        const double mult = (c == 0 || (n % 2 == 0 && c == n / 2)) ? 1.0 : 2.0;
        const std::complex<double> v = spec[(static_cast<std::size_t>(a) * n + b) * nh + c];
        acc += mult * std::norm(v) * std::pow(k2, s);
      }
    }
    return acc;
  });
  // Parseval: sum |f|^2 = (1/N) sum |F|^2.
  return std::sqrt(total * g.cell_volume() / static_cast<double>(g.size()));
}

ScalarField rotation_derivative(const ScalarField& f, int axis) {
  require(axis >= 1 && axis <= 3, ErrorKind::Config, "rotation axis must be 1, 2 or 3");
  const Grid3& g = f.grid;
  // Omega_1 = y d_z - z d_y, Omega_2 = z d_x - x d_z, Omega_3 = x d_y - y d_x.
  const int p = axis % 3;        // coordinate multiplying the first derivative
  const int q = (axis + 1) % 3;  // derivative direction of the first term
  const ScalarField dq = derivative(f, q);
  const ScalarField dp = derivative(f, p);
  ScalarField out(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double x[3] = {g.coord(i), g.coord(j), g.coord(k)};
        const std::size_t id = g.index(i, j, k);
        out[id] = x[p] * dq[id] - x[q] * dp[id];
      }
  return out;
}

ScalarField radial_derivative(const ScalarField& f) {
  const Grid3& g = f.grid;
  const Vector3Field grad = gradient(f);
  ScalarField out(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double r = node_radius(g, i, j, k);
        if (r == 0.0) continue;
        const std::size_t id = g.index(i, j, k);
        out[id] = (g.coord(i) * grad[0][id] + g.coord(j) * grad[1][id] + g.coord(k) * grad[2][id]) / r;
      }
  return out;
}

AnnulusNorms annulus_norms(const ScalarField& f, double R) {
  const Grid3& g = f.grid;
  require(R + 2.0 < g.half_extent(), ErrorKind::AnnulusOutOfDomain,
          "R + 2 must be below half_extent " + std::to_string(g.half_extent()));
  AnnulusNorms out;
  std::vector<std::size_t> shell;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double r = node_radius(g, i, j, k);
        const std::size_t id = g.index(i, j, k);
        if (r > R && r < R + 1.0) out.sup_on_annulus = std::max(out.sup_on_annulus, std::abs(f[id]));
        if (r > R - 1.0 && r < R + 2.0) shell.push_back(id);
      }
  auto shell_l2 = [&](const ScalarField& h) {
    double s = 0.0;
    for (std::size_t id : shell) s += h[id] * h[id];
    return std::sqrt(s * g.cell_volume());
  };
  auto both_radial_orders = [&](const ScalarField& h) { return shell_l2(h) + shell_l2(radial_derivative(h)); };

  double total = both_radial_orders(f);
  for (int a = 1; a <= 3; ++a) {
    const ScalarField oa = rotation_derivative(f, a);
    total += both_radial_orders(oa);
    for (int b = 1; b <= 3; ++b) total += both_radial_orders(rotation_derivative(oa, b));
  }
  out.sum_l2_terms = total;
  out.fitted_constant = total > 0.0 ? out.sup_on_annulus * R / total : 0.0;
  return out;
}

}  // namespace afwl
