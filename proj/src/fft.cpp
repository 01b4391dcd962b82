#include "afwl/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace afwl {

namespace {
// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFFT3::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

RealFFT3::RealFFT3(int m) : m_(m), impl_(std::make_unique<Impl>()) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->real = fftw_alloc_real(real_size());
  impl_->spec = fftw_alloc_complex(spectrum_size());
  if (!impl_->real || !impl_->spec) throw std::bad_alloc();
  impl_->fwd = fftw_plan_dft_r2c_3d(m, m, m, impl_->real, impl_->spec, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_3d(m, m, m, impl_->spec, impl_->real, FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->inv) throw std::runtime_error("fftw planning failed");
}

RealFFT3::~RealFFT3() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
  if (impl_->inv) fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->real);
  fftw_free(impl_->spec);
}

void RealFFT3::forward(const double* in, std::complex<double>* out) {
  std::memcpy(impl_->real, in, real_size() * sizeof(double));
  fftw_execute(impl_->fwd);
  std::memcpy(static_cast<void*>(out), impl_->spec, spectrum_size() * sizeof(fftw_complex));
}

void RealFFT3::inverse(const std::complex<double>* in, double* out) {
  // c2r destroys its input, so it always runs on the internal copy.
  std::memcpy(impl_->spec, static_cast<const void*>(in), spectrum_size() * sizeof(fftw_complex));
  fftw_execute(impl_->inv);
  std::memcpy(out, impl_->real, real_size() * sizeof(double));
}

}  // namespace afwl
