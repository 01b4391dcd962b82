#pragma once

#include <array>

namespace afwl {

/// Truncated Taylor polynomial in three variables through total degree 5.
/// Coefficient c_J multiplies h^J, so d^J f = J! c_J.
class Jet3 {
 public:
  static constexpr int kDegree = 5;
  static constexpr int kSize = 56;

  struct Index {
    int a, b, c;
    int order() const { return a + b + c; }
  };

  Jet3() { coeff_.fill(0.0); }
  static Jet3 constant(double v);
  /// The coordinate x_axis expanded around `value`.
  static Jet3 variable(int axis, double value);

  static const std::array<Index, kSize>& indices();
  static int position(int a, int b, int c);

  double operator[](int i) const { return coeff_[i]; }
  double& operator[](int i) { return coeff_[i]; }
  double value() const { return coeff_[0]; }

  /// d^J at the expansion point: a! b! c! * coefficient.
  double derivative(int a, int b, int c) const;

  Jet3 operator+(const Jet3& o) const;
  Jet3 operator-(const Jet3& o) const;
  Jet3 operator*(const Jet3& o) const;
  Jet3 operator*(double s) const;

  /// f(this) given f^(m)(value()) for m = 0..5.
  Jet3 compose(const std::array<double, kDegree + 1>& derivs) const;

 private:
  std::array<double, kSize> coeff_;
};

}  // namespace afwl
