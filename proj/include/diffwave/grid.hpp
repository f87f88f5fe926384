#pragma once

#include <cstddef>
#include <vector>

namespace diffwave {

/// Uniform cell-centred grid on [0, L]: x_i = (i + 1/2) dx, dx = L / N.
struct Grid1D {
  double length = 0.0;
  std::size_t cells = 0;

  /// Validates N >= 16 and L > 0.
  static Grid1D make(double length, std::size_t cells);

  double dx() const noexcept { return length / static_cast<double>(cells); }
  double center(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * dx(); }
  double face(std::size_t i) const noexcept { return static_cast<double>(i) * dx(); }
  std::vector<double> centers() const;
  std::vector<double> faces() const;
};

}  // namespace diffwave
