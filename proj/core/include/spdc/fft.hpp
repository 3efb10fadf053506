#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "spdc/grid.hpp"

namespace spdc {

/// Continuous-measure Fourier transforms on origin-centered grids.
///
/// Convention:
///   forward:  F(q) = sum_j f(x_j) exp(-i q x_j) dx
///   inverse:  f(x) = sum_k F(q_k) exp(+i q_k x) dq / (2 pi)
///
/// With dq dx n = 2 pi the pair is exactly unitary in the stated measure and
/// the analytic Gaussian pair exp(-x^2/(4w^2)) <-> 2w sqrt(pi) exp(-q^2 w^2)
/// holds on the grid to machine precision.

/// Reusable 1D transform engine (wraps FFTW plans; one instance per thread).
class FftEngine1D {
public:
  explicit FftEngine1D(std::size_t n);
  ~FftEngine1D();
  FftEngine1D(const FftEngine1D&) = delete;
  FftEngine1D& operator=(const FftEngine1D&) = delete;

  std::size_t size() const { return n_; }

  /// Position-domain samples -> frequency-domain samples (physical scaling).
  std::vector<std::complex<double>> to_frequency(
      const Grid1D& grid, const std::vector<std::complex<double>>& values);

  /// Frequency-domain samples -> position-domain samples (physical scaling).
  std::vector<std::complex<double>> to_position(
      const Grid1D& grid, const std::vector<std::complex<double>>& values);

private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Reusable 2D (n x n, row-major, index = s * n + i) transform engine.
class FftEngine2D {
public:
  explicit FftEngine2D(std::size_t n);
  ~FftEngine2D();
  FftEngine2D(const FftEngine2D&) = delete;
  FftEngine2D& operator=(const FftEngine2D&) = delete;

  std::size_t size() const { return n_; }

  /// 2D frequency-domain samples -> position-domain samples: applies the
  /// inverse convention along both axes, overall factor (dq/2pi)^2.
  void to_position_inplace(const Grid1D& grid,
                           std::vector<std::complex<double>>& values);

private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// One-shot transforms. Input field must be finite (enforced by Field1D).
Field1D fft_physical(const Field1D& f);
Field1D ifft_physical(const Field1D& f);

}  // namespace spdc
