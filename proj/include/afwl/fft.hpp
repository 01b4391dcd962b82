#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace afwl {

/// Real-to-complex 3D transform on an m^3 cube (unnormalised, FFTW sign
/// convention: forward uses e^{-i k.x}). The half spectrum has m*m*(m/2+1)
/// entries with the last axis halved.
class RealFFT3 {
 public:
  explicit RealFFT3(int m);
  ~RealFFT3();
  RealFFT3(const RealFFT3&) = delete;
  RealFFT3& operator=(const RealFFT3&) = delete;

  int size() const { return m_; }
  std::size_t real_size() const { return static_cast<std::size_t>(m_) * m_ * m_; }
  std::size_t spectrum_size() const { return static_cast<std::size_t>(m_) * m_ * (m_ / 2 + 1); }

  void forward(const double* in, std::complex<double>* out);
  /// Inverse without the 1/m^3 factor.
  void inverse(const std::complex<double>* in, double* out);

 private:
  struct Impl;
  int m_;
  std::unique_ptr<Impl> impl_;
};

/// Signed integer frequency index of position k on an m-point axis.
inline int signed_frequency(int k, int m) { return k <= m / 2 ? k : k - m; }

}  // namespace afwl
