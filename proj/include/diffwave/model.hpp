#pragma once

#include <functional>
#include <string>

namespace diffwave {

/// Smooth decreasing pressure p(v) of the p-system, with derivatives up to order 3.
///
/// The gamma law p(v) = v^(-gamma) is the concrete instance used everywhere; a
/// user-supplied law can be plugged in through `custom` (value and derivatives
/// are then the caller's responsibility).
class PressureLaw {
 public:
  /// f(v, order) must return d^order p / dv^order for order in 0..3.
  using Evaluator = std::function<double(double, int)>;

  static PressureLaw gamma_law(double gamma);
  static PressureLaw custom(Evaluator f, std::string name);

  bool is_gamma_law() const noexcept { return !custom_; }
  double gamma() const noexcept { return gamma_; }
  const std::string& name() const noexcept { return name_; }

  double operator()(double v) const;
  double deriv(double v, int order) const;
  double sound_speed(double v) const;

 private:
  PressureLaw() = default;
  double gamma_ = 1.4;
  Evaluator custom_;
  std::string name_;
};

double pressure(const PressureLaw& law, double v);
double pressure_deriv(const PressureLaw& law, double v, int order);
double sound_speed(const PressureLaw& law, double v);

/// Time-dependent damping a(t) = alpha / (1+t)^lambda and its kernels.
///
/// beta(t) is the free decay factor of a damped velocity, beta' = -a beta, and
/// B(t) = -int_t^inf beta is its (negative) remaining time integral.
class DampingSchedule {
 public:
  DampingSchedule(double alpha, double lambda);

  double alpha() const noexcept { return alpha_; }
  double lambda() const noexcept { return lambda_; }

  double coefficient(double t) const;
  double beta(double t) const;
  double beta_derivative(double t) const;
  /// B(t); throws NumericalError when the integral diverges (lambda = 1, alpha <= 1).
  double tail(double t) const;
  /// int_{t0}^{t1} a(s) ds in closed form.
  double integral(double t0, double t1) const;

 private:
  double alpha_;
  double lambda_;
};

double damping_coefficient(const DampingSchedule& sched, double t);
double beta_kernel(const DampingSchedule& sched, double t);
double B_tail(const DampingSchedule& sched, double t);

/// Smallest time on a log-spaced scan of [0, t_max] from which |B(t)| <= 2 beta(t)/a(t)
/// holds at every later scan point. The lower bound beta/a <= |B| holds for all t.
double sandwich_threshold(const DampingSchedule& sched, double t_max, int scan_points = 400);

/// Far-field state (v+, u+) and the diffusivity kappa = -p'(v+)/alpha.
struct FarFieldState {
  double v_plus = 1.0;
  double u_plus = 0.0;
  double kappa = 0.0;

  static FarFieldState make(const PressureLaw& law, const DampingSchedule& sched, double v_plus,
                            double u_plus);
};

}  // namespace diffwave
