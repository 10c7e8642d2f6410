#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace scatlab {

/// Unnormalized complex FFT over a row-major array with the given shape.
/// Plans are made with FFTW_ESTIMATE so results do not depend on timing.
class FftPlan {
 public:
  explicit FftPlan(std::vector<std::size_t> shape);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& other) noexcept;
  FftPlan& operator=(FftPlan&& other) noexcept;

  std::size_t size() const { return size_; }
  const std::vector<std::size_t>& shape() const { return shape_; }

  /// In place, sign -1: X_m = sum_j x_j exp(-2 pi i j m / N).
  void forward(std::complex<double>* data) const;
  /// In place, sign +1, no 1/N factor.
  void backward(std::complex<double>* data) const;

 private:
  void release() noexcept;

  std::vector<std::size_t> shape_;
  std::size_t size_ = 0;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

}  // namespace scatlab
