#pragma once

#include <array>
#include <string>

#include "afwl/grid.hpp"

namespace afwl {

enum class DataKind { Zero, Bump, VelocityBump, Gaussian, Lorentzian, PlaneWave, Outgoing };

std::string to_string(DataKind k);
DataKind parse_data_kind(const std::string& s);

/// Closed-form Cauchy data.
///   Bump          u0 = A psi(|x-c|/w), u1 = 0, psi(s) = exp(1 - 1/(1-s^2)) on s < 1
///   VelocityBump  u0 = 0, u1 = A psi(|x-c|/w)
///   Gaussian      u0 = A exp(-|x-c|^2/w^2), u1 = 0
///   Lorentzian    u0 = 0, u1 = A / (1 + |x-c|^2/w^2)
///   PlaneWave     u0 = A cos(k.x), k = 2 pi mode / (n dx), u1 = 0
///   Outgoing      u = f(r - t)/r with f(s) = A psi((s - radius)/w), sampled at t = 0
struct InitialDataSpec {
  DataKind kind = DataKind::Bump;
  double amplitude = 1.0;
  double width = 1.0;
  double radius = 3.0;  // Outgoing only
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<int, 3> mode{1, 0, 0};

  void validate() const;
};

/// Smooth compactly supported profile, psi(0) = 1, psi = 0 for |s| >= 1.
double smooth_bump(double s);
double smooth_bump_derivative(double s);

StateSlice make_initial_data(const Grid3& grid, const InitialDataSpec& spec, double t = 0.0);

}  // namespace afwl
