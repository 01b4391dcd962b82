#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace afwl {

/// Uniform periodic cube with n nodes per axis. Node k sits at x_k = -L + k*dx
/// with L = n*dx/2. Storage is row-major with the x index slowest.
struct Grid3 {
  int n = 16;
  double dx = 1.0;

  double half_extent() const { return 0.5 * n * dx; }
  double coord(int k) const { return -half_extent() + k * dx; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  double cell_volume() const { return dx * dx * dx; }
  int wrap(int k) const { return ((k % n) + n) % n; }

  /// Throws Config if n is odd or < 16, or dx is not positive.
  void validate() const;

  bool operator==(const Grid3& o) const { return n == o.n && dx == o.dx; }
  bool operator!=(const Grid3& o) const { return !(*this == o); }
};

struct ScalarField {
  Grid3 grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid3& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
  std::size_t size() const { return values.size(); }

  bool all_finite() const;
};

using Vector3Field = std::array<ScalarField, 3>;

/// Cauchy data / solution snapshot (u, u_t) at time t.
struct StateSlice {
  ScalarField u;
  ScalarField ut;
  double t = 0.0;

  StateSlice() = default;
  explicit StateSlice(const Grid3& g, double time = 0.0) : u(g), ut(g), t(time) {}
  const Grid3& grid() const { return u.grid; }
};

/// Fills f(x, y, z) at every node.
template <class F>
ScalarField sample_field(const Grid3& g, F&& f) {
  ScalarField out(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) out.at(i, j, k) = f(g.coord(i), g.coord(j), g.coord(k));
  return out;
}

}  // namespace afwl
