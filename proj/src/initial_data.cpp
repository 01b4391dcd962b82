#include "afwl/initial_data.hpp"

#include <cmath>

#include "afwl/error.hpp"

namespace afwl {

std::string to_string(DataKind k) {
  switch (k) {
    case DataKind::Zero: return "zero";
    case DataKind::Bump: return "bump";
    case DataKind::VelocityBump: return "velocity_bump";
    case DataKind::Gaussian: return "gaussian";
    case DataKind::Lorentzian: return "lorentzian";
    case DataKind::PlaneWave: return "plane_wave";
    case DataKind::Outgoing: return "outgoing";
  }
  return "zero";
}

DataKind parse_data_kind(const std::string& s) {
  for (DataKind k : {DataKind::Zero, DataKind::Bump, DataKind::VelocityBump, DataKind::Gaussian,
                     DataKind::Lorentzian, DataKind::PlaneWave, DataKind::Outgoing})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::Config, "unknown data.kind '" + s + "'");
}

void InitialDataSpec::validate() const {
  require(std::isfinite(amplitude), ErrorKind::Config, "data.amplitude must be finite");
  require(width > 0.0, ErrorKind::Config, "data.width must be positive");
  if (kind == DataKind::Outgoing)
    require(radius > width, ErrorKind::Config, "data.radius must exceed data.width for outgoing data");
}

double smooth_bump(double s) {
  const double a = std::abs(s);
  if (a >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

double smooth_bump_derivative(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return smooth_bump(s) * (-2.0 * s / (q * q));
}

StateSlice make_initial_data(const Grid3& grid, const InitialDataSpec& spec, double t) {
  grid.validate();
  spec.validate();
  StateSlice s(grid, t);
  const double A = spec.amplitude, w = spec.width;
  const double two_pi_over = 2.0 * M_PI / (grid.n * grid.dx);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      for (int k = 0; k < grid.n; ++k) {
        const double x[3] = {grid.coord(i), grid.coord(j), grid.coord(k)};
        const double d[3] = {x[0] - spec.center[0], x[1] - spec.center[1], x[2] - spec.center[2]};
        const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        const std::size_t id = grid.index(i, j, k);
        switch (spec.kind) {
          case DataKind::Zero: break;
          case DataKind::Bump: s.u[id] = A * smooth_bump(r / w); break;
          case DataKind::VelocityBump: s.ut[id] = A * smooth_bump(r / w); break;
          case DataKind::Gaussian: s.u[id] = A * std::exp(-r * r / (w * w)); break;
          case DataKind::Lorentzian: s.ut[id] = A / (1.0 + r * r / (w * w)); break;
          case DataKind::PlaneWave: {
            const double phase =
                two_pi_over * (spec.mode[0] * x[0] + spec.mode[1] * x[1] + spec.mode[2] * x[2]);
            s.u[id] = A * std::cos(phase);
            break;
          }
          case DataKind::Outgoing: {
            // u = f(r - t)/r, so u_t = -f'(r)/r at t = 0.
            if (r == 0.0) break;
            const double z = (r - spec.radius) / w;
            s.u[id] = A * smooth_bump(z) / r;
            s.ut[id] = -A * smooth_bump_derivative(z) / (w * r);
            break;
          }
        }
      }
  return s;
}

}  // namespace afwl
