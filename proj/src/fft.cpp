#include "bwave/fft.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <new>

namespace bwave::detail {

namespace {
// FFTW's planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  real_ = fftw_alloc_real(n_);
  spec_ = fftw_alloc_complex(n_ / 2 + 1);
  if (real_ == nullptr || spec_ == nullptr) {
    fftw_free(real_);
    fftw_free(spec_);
    throw std::bad_alloc();
  }
  const int len = static_cast<int>(n_);
  forward_plan_ = fftw_plan_dft_r2c_1d(len, real_, spec_, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(len, spec_, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(inverse_plan_);
  fftw_destroy_plan(forward_plan_);
  fftw_free(spec_);
  fftw_free(real_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(forward_plan_);
  for (std::size_t m = 0; m < modes(); ++m) out[m] = {spec_[m][0], spec_[m][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  for (std::size_t m = 0; m < modes(); ++m) {
    spec_[m][0] = in[m].real();
    spec_[m][1] = in[m].imag();
  }
  fftw_execute(inverse_plan_);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = real_[j] * scale;
}

RealFft& thread_fft(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<RealFft>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<RealFft>(n)).first;
  return *it->second;
}

}  // namespace bwave::detail
