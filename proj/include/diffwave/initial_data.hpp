#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "diffwave/correction.hpp"
#include "diffwave/grid.hpp"
#include "diffwave/solver.hpp"
#include "diffwave/waves.hpp"

namespace diffwave {

/// Smooth compactly supported perturbations of the far-field state.
///
///   dirichlet: v0 = v+ + A b[2,10](x),                        u0 = u+ M(x) + A b[3,9](x)
///   neumann:   v0 = v+ + (v0(0) - v+) T(x) + A b[2,10](x),    u0 = u+ + (u0(0) - u+) T(x) + A b[3,9](x)
///
/// b[a,b] is the unit-height bump on [a, b]; M and T are the antiderivative and
/// tail of the unit-mass mollifier on [1, 3]. Both families meet their boundary
/// condition at x = 0 exactly (u0(0) = 0, resp. u0'(0) = 0).
struct InitialDataSpec {
  Boundary boundary = Boundary::dirichlet;
  FarFieldState far_field{};
  double amplitude = 0.01;
  double v0_at_0 = 1.0;  // neumann only
  double u0_at_0 = 0.0;  // neumann only
};

class InitialData {
 public:
  explicit InitialData(const InitialDataSpec& spec);

  const InitialDataSpec& spec() const noexcept { return spec_; }
  double v0(double x) const;
  double u0(double x) const;
  /// v0 with the interval outside which v0 == v+.
  InitialProfile v_profile() const;
  /// Cell means of (v0, u0) by adaptive quadrature.
  State cell_averages(const Grid1D& grid) const;

 private:
  InitialDataSpec spec_;
  Mollifier m0_;
};

/// exp(1 - 1/(1 - y^2)) with y the affine map of [a, b] onto [-1, 1]; peak value 1.
double unit_bump(double x, double a, double b);

}  // namespace diffwave
