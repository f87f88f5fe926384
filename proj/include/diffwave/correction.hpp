#pragma once

#include <memory>
#include <span>
#include <vector>

#include "diffwave/model.hpp"

namespace diffwave {

/// Unit-mass C-infinity bump supported on [1, 3]:
/// m0(x) = exp(-1/(1-y^2)) / Z with y = x - 2.
///
/// The antiderivative has no closed form; it is tabulated once at 2^14
/// intervals (5-point Gauss-Legendre per interval) and read back with cubic
/// Hermite interpolation using m0 itself as the slope.
class Mollifier {
 public:
  static constexpr double kLower = 1.0;
  static constexpr double kUpper = 3.0;

  Mollifier();

  double value(double x) const;
  double derivative(double x) const;
  /// int_0^x m0
  double antiderivative(double x) const;
  /// int_x^inf m0 = 1 - antiderivative(x)
  double tail(double x) const;
  /// Mean of m0 over [a, b], exact up to the table error.
  double cell_average(double a, double b) const;

 private:
  struct Table;
  std::shared_ptr<const Table> table_;
};

enum class MollifierField { value, antiderivative, tail };
double mollifier_eval(const Mollifier& m0, double x, MollifierField want);

enum class CorrectionRegime { dirichlet, neumann };
enum class CorrectionField { v_hat, u_hat, dt_v_hat, dx_u_hat, dt_u_hat };

/// Correction pair (v_hat, u_hat) carrying the far-field momentum u+ beta(t).
///
///   dirichlet: v_hat = u+ m0(x) B(t),              u_hat = u+ beta(t) int_0^x m0
///   neumann:   v_hat = -(u0(0) - u+) m0(x) B(t),   u_hat = [u+ + (u0(0) - u+) int_x^inf m0] beta(t)
///
/// Both satisfy d_t v_hat = d_x u_hat and d_t u_hat = -a(t) u_hat exactly.
class CorrectionPair {
 public:
  static CorrectionPair dirichlet(double u_plus, const DampingSchedule& sched);
  static CorrectionPair neumann(double u_plus, double u0_at_0, const DampingSchedule& sched);

  CorrectionRegime regime() const noexcept { return regime_; }
  double u_plus() const noexcept { return u_plus_; }
  double u0_at_0() const noexcept { return u0_at_0_; }
  const DampingSchedule& schedule() const noexcept { return sched_; }
  const Mollifier& mollifier() const noexcept { return m0_; }
  /// Coefficient of m0(x) B(t) in v_hat.
  double amplitude() const noexcept;

  double eval(double x, double t, CorrectionField want) const;
  /// Evaluates at every x, computing beta(t) and B(t) once.
  void sample(std::span<const double> xs, double t, CorrectionField want,
              std::span<double> out) const;
  /// Cell means of v_hat over [x_faces[i], x_faces[i+1]].
  void sample_v_cell_averages(std::span<const double> faces, double t,
                              std::span<double> out) const;

 private:
  CorrectionPair(CorrectionRegime regime, double u_plus, double u0_at_0,
                 const DampingSchedule& sched);
  double eval_with(double x, double beta, double beta_dot, double tail, CorrectionField want) const;

  CorrectionRegime regime_;
  double u_plus_;
  double u0_at_0_;
  DampingSchedule sched_;
  Mollifier m0_;
};

double correction_eval(const CorrectionPair& pair, double x, double t, CorrectionField want);

}  // namespace diffwave
