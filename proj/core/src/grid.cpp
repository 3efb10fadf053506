#include "spdc/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spdc {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid1D::Grid1D(std::size_t n, double dx) : n_(n), dx_(dx) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("Grid1D: n must be a power of two >= 8, got " +
                                std::to_string(n));
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw std::invalid_argument("Grid1D: dx must be positive and finite");
  }
  dq_ = 2.0 * std::numbers::pi / (static_cast<double>(n_) * dx_);
  half_ = static_cast<double>(n_ / 2);
}

std::vector<double> Grid1D::x_values() const {
  std::vector<double> v(n_);
  for (std::size_t j = 0; j < n_; ++j) v[j] = x(j);
  return v;
}

std::vector<double> Grid1D::q_values() const {
  std::vector<double> v(n_);
  for (std::size_t j = 0; j < n_; ++j) v[j] = q(j);
  return v;
}

Field1D::Field1D(Grid1D grid, std::vector<std::complex<double>> values,
                 Domain domain)
    : grid_(grid), values_(std::move(values)), domain_(domain) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("Field1D: value count does not match grid");
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("Field1D: non-finite sample");
    }
  }
}

std::vector<double> Field1D::intensity() const {
  std::vector<double> out(values_.size());
  for (std::size_t j = 0; j < values_.size(); ++j) out[j] = std::norm(values_[j]);
  return out;
}

double Field1D::power() const {
  double measure = domain_ == Domain::Position
                       ? grid_.dx()
                       : grid_.dq() / (2.0 * std::numbers::pi);
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum * measure;
}

}  // namespace spdc
