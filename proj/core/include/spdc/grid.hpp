#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace spdc {

/// Uniform origin-centered 1D transverse grid together with its conjugate
/// spatial-frequency grid.
///
/// Coordinates are x_j = (j - n/2) dx and the conjugate spacing satisfies
/// dq * dx * n = 2 pi exactly, so that the physically scaled transforms in
/// fft.hpp map analytic Gaussian pairs onto each other without fudge factors.
class Grid1D {
public:
  /// n must be a power of two, n >= 8; dx > 0 in meters.
  Grid1D(std::size_t n, double dx);

  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double dq() const { return dq_; }
  double extent() const { return static_cast<double>(n_) * dx_; }

  /// Position coordinate of sample j, x_j = (j - n/2) dx.
  double x(std::size_t j) const {
    return (static_cast<double>(j) - half_) * dx_;
  }
  /// Conjugate (spatial frequency) coordinate q_j = (j - n/2) dq [rad/m].
  double q(std::size_t j) const {
    return (static_cast<double>(j) - half_) * dq_;
  }

  std::vector<double> x_values() const;
  std::vector<double> q_values() const;

  /// Index of the grid point at the origin (value exactly 0).
  std::size_t center_index() const { return n_ / 2; }

  bool operator==(const Grid1D& other) const {
    return n_ == other.n_ && dx_ == other.dx_;
  }

private:
  std::size_t n_;
  double dx_;
  double dq_;
  double half_;
};

enum class Domain { Position, Frequency };

/// Complex amplitudes sampled on a Grid1D, tagged with the domain the samples
/// live in. Values are validated to be finite on construction.
class Field1D {
public:
  Field1D(Grid1D grid, std::vector<std::complex<double>> values, Domain domain);

  const Grid1D& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  const std::vector<std::complex<double>>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Coordinate of sample j in this field's own domain.
  double coord(std::size_t j) const {
    return domain_ == Domain::Position ? grid_.x(j) : grid_.q(j);
  }

  /// |f_j|^2 for every sample.
  std::vector<double> intensity() const;

  /// Sum |f|^2 * (dx or dq/2pi) -- the L2 norm in the physical measure.
  double power() const;

private:
  Grid1D grid_;
  std::vector<std::complex<double>> values_;
  Domain domain_;
};

}  // namespace spdc
