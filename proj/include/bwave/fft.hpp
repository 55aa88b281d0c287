#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace bwave::detail {

// Real-to-complex FFT of fixed length backed by FFTW. Owns its plans and
// aligned buffers; not safe to share between threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t modes() const { return n_ / 2 + 1; }

  // Unnormalized forward transform: out_m = sum_j in_j exp(-2 pi i j m / n).
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Inverse including the 1/n factor.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_plan_ = nullptr;
  fftw_plan inverse_plan_ = nullptr;
};

// Per-thread transform of length n, created on first use.
RealFft& thread_fft(std::size_t n);

}  // namespace bwave::detail
