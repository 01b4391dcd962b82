#include "afwl/jet.hpp"

#include <stdexcept>

namespace afwl {

namespace {

struct Tables {
  std::array<Jet3::Index, Jet3::kSize> idx{};
  int pos[6][6][6];
  // product[i][j] = position of idx[i] + idx[j], or -1 when truncated.
  int product[Jet3::kSize][Jet3::kSize];

  Tables() {
    int p = 0;
    for (int d = 0; d <= Jet3::kDegree; ++d)
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) {
          const int c = d - a - b;
          idx[p] = {a, b, c};
          pos[a][b][c] = p++;
        }
    if (p != Jet3::kSize) throw std::logic_error("jet table size");
    for (int i = 0; i < Jet3::kSize; ++i)
      for (int j = 0; j < Jet3::kSize; ++j) {
        const auto& x = idx[i];
        const auto& y = idx[j];
        product[i][j] = x.order() + y.order() <= Jet3::kDegree ? pos[x.a + y.a][x.b + y.b][x.c + y.c] : -1;
      }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

const std::array<Jet3::Index, Jet3::kSize>& Jet3::indices() { return tables().idx; }

int Jet3::position(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0 || a + b + c > kDegree) return -1;
  return tables().pos[a][b][c];
}

Jet3 Jet3::constant(double v) {
  Jet3 j;
  j.coeff_[0] = v;
  return j;
}

Jet3 Jet3::variable(int axis, double value) {
  Jet3 j = constant(value);
  j.coeff_[position(axis == 0, axis == 1, axis == 2)] = 1.0;
  return j;
}

double Jet3::derivative(int a, int b, int c) const {
  const int p = position(a, b, c);
  if (p < 0) throw std::out_of_range("jet derivative order exceeds 5");
  return factorial(a) * factorial(b) * factorial(c) * coeff_[p];
}

Jet3 Jet3::operator+(const Jet3& o) const {
  Jet3 r;
  for (int i = 0; i < kSize; ++i) r.coeff_[i] = coeff_[i] + o.coeff_[i];
  return r;
}

Jet3 Jet3::operator-(const Jet3& o) const {
  Jet3 r;
  for (int i = 0; i < kSize; ++i) r.coeff_[i] = coeff_[i] - o.coeff_[i];
  return r;
}

Jet3 Jet3::operator*(double s) const {
  Jet3 r;
  for (int i = 0; i < kSize; ++i) r.coeff_[i] = coeff_[i] * s;
  return r;
}

Jet3 Jet3::operator*(const Jet3& o) const {
  const Tables& t = tables();
  Jet3 r;
  for (int i = 0; i < kSize; ++i) {
    if (coeff_[i] == 0.0) continue;
    for (int j = 0; j < kSize; ++j) {
      const int p = t.product[i][j];
      if (p >= 0) r.coeff_[p] += coeff_[i] * o.coeff_[j];
    }
  }
  return r;
}

Jet3 Jet3::compose(const std::array<double, kDegree + 1>& derivs) const {
  Jet3 shift = *this;
  shift.coeff_[0] = 0.0;
  Jet3 result = constant(derivs[0]);
  Jet3 power = constant(1.0);
  for (int m = 1; m <= kDegree; ++m) {
    power = power * shift;
    result = result + power * (derivs[m] / factorial(m));
  }
  return result;
}

}  // namespace afwl
