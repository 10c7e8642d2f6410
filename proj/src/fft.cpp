#include "scatlab/fft.hpp"

#include <fftw3.h>

#include <stdexcept>
#include <utility>

namespace scatlab {

FftPlan::FftPlan(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  size_ = 1;
  std::vector<int> dims;
  for (std::size_t s : shape_) {
    size_ *= s;
    dims.push_back(static_cast<int>(s));
  }
  // FFTW_ESTIMATE leaves the buffer untouched; UNALIGNED lets us execute on
  // arbitrary slices of larger arrays.
  std::vector<std::complex<double>> scratch(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, FFTW_FORWARD, flags);
  backward_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, FFTW_BACKWARD, flags);
  if (forward_ == nullptr || backward_ == nullptr) {
    release();
    throw std::runtime_error("FFTW plan creation failed");
  }
}

FftPlan::~FftPlan() { release(); }

FftPlan::FftPlan(FftPlan&& other) noexcept
    : shape_(std::move(other.shape_)), size_(other.size_), forward_(other.forward_), backward_(other.backward_) {
  other.forward_ = nullptr;
  other.backward_ = nullptr;
}

FftPlan& FftPlan::operator=(FftPlan&& other) noexcept {
  if (this != &other) {
    release();
    shape_ = std::move(other.shape_);
    size_ = other.size_;
    forward_ = std::exchange(other.forward_, nullptr);
    backward_ = std::exchange(other.backward_, nullptr);
  }
  return *this;
}

void FftPlan::release() noexcept {
  if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  forward_ = nullptr;
  backward_ = nullptr;
}

void FftPlan::forward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(forward_), p, p);
}

void FftPlan::backward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(backward_), p, p);
}

}  // namespace scatlab
