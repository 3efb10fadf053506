#include "spdc/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>
#include <stdexcept>

namespace spdc {

namespace {

// FFTW plan creation/destruction is not thread safe; executions are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

struct FftEngine1D::Impl {
  std::vector<std::complex<double>> buf;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Impl(std::size_t n) : buf(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(buf.data()),
                               as_fftw(buf.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(buf.data()),
                                as_fftw(buf.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
};

FftEngine1D::FftEngine1D(std::size_t n) : n_(n), impl_(std::make_unique<Impl>(n)) {}
FftEngine1D::~FftEngine1D() = default;

// The origin-centered convention reduces to a plain DFT after a (-1)^j
// checkerboard on input and output; the residual phase exp(-i pi n / 2) is
// unity because n is a multiple of 4 (power of two >= 8).
std::vector<std::complex<double>> FftEngine1D::to_frequency(
    const Grid1D& grid, const std::vector<std::complex<double>>& values) {
  if (grid.size() != n_ || values.size() != n_) {
    throw std::invalid_argument("FftEngine1D: size mismatch");
  }
  auto& buf = impl_->buf;
  for (std::size_t j = 0; j < n_; ++j) {
    buf[j] = (j & 1) ? -values[j] : values[j];
  }
  fftw_execute(impl_->forward);
  const double scale = grid.dx();
  std::vector<std::complex<double>> out(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    out[k] = ((k & 1) ? -buf[k] : buf[k]) * scale;
  }
  return out;
}

std::vector<std::complex<double>> FftEngine1D::to_position(
    const Grid1D& grid, const std::vector<std::complex<double>>& values) {
  if (grid.size() != n_ || values.size() != n_) {
    throw std::invalid_argument("FftEngine1D: size mismatch");
  }
  auto& buf = impl_->buf;
  for (std::size_t k = 0; k < n_; ++k) {
    buf[k] = (k & 1) ? -values[k] : values[k];
  }
  fftw_execute(impl_->backward);
  const double scale = grid.dq() / (2.0 * std::numbers::pi);
  std::vector<std::complex<double>> out(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    out[j] = ((j & 1) ? -buf[j] : buf[j]) * scale;
  }
  return out;
}

struct FftEngine2D::Impl {
  std::vector<std::complex<double>> buf;
  fftw_plan backward = nullptr;

  explicit Impl(std::size_t n) : buf(n * n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    backward = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n),
                                as_fftw(buf.data()), as_fftw(buf.data()),
                                FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(backward);
  }
};

FftEngine2D::FftEngine2D(std::size_t n) : n_(n), impl_(std::make_unique<Impl>(n)) {}
FftEngine2D::~FftEngine2D() = default;

void FftEngine2D::to_position_inplace(const Grid1D& grid,
                                      std::vector<std::complex<double>>& values) {
  if (grid.size() != n_ || values.size() != n_ * n_) {
    throw std::invalid_argument("FftEngine2D: size mismatch");
  }
  auto& buf = impl_->buf;
  for (std::size_t s = 0; s < n_; ++s) {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t idx = s * n_ + i;
      buf[idx] = ((s + i) & 1) ? -values[idx] : values[idx];
    }
  }
  fftw_execute(impl_->backward);
  const double scale1 = grid.dq() / (2.0 * std::numbers::pi);
  const double scale = scale1 * scale1;
  for (std::size_t s = 0; s < n_; ++s) {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t idx = s * n_ + i;
      values[idx] = (((s + i) & 1) ? -buf[idx] : buf[idx]) * scale;
    }
  }
}

Field1D fft_physical(const Field1D& f) {
  if (f.domain() != Domain::Position) {
    throw std::invalid_argument("fft_physical: expected a position-domain field");
  }
  FftEngine1D engine(f.grid().size());
  return Field1D(f.grid(), engine.to_frequency(f.grid(), f.values()),
                 Domain::Frequency);
}

Field1D ifft_physical(const Field1D& f) {
  if (f.domain() != Domain::Frequency) {
    throw std::invalid_argument("ifft_physical: expected a frequency-domain field");
  }
  FftEngine1D engine(f.grid().size());
  return Field1D(f.grid(), engine.to_position(f.grid(), f.values()),
                 Domain::Position);
}

}  // namespace spdc
