#include "diffwave/grid.hpp"

#include <string>

#include "diffwave/errors.hpp"

namespace diffwave {

Grid1D Grid1D::make(double length, std::size_t cells) {
  if (!(length > 0.0)) throw DomainError("grid length must be > 0");
  if (cells < 16) throw DomainError("grid needs at least 16 cells, got " + std::to_string(cells));
  return Grid1D{length, cells};
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> xs(cells);
  for (std::size_t i = 0; i < cells; ++i) xs[i] = center(i);
  return xs;
}

std::vector<double> Grid1D::faces() const {
  std::vector<double> xs(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) xs[i] = face(i);
  return xs;
}

}  // namespace diffwave
