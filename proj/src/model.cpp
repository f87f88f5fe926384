#include "diffwave/model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "diffwave/errors.hpp"

namespace diffwave {

namespace {

void require_positive_volume(double v) {
  if (!(v > 0.0)) {
    throw DomainError("pressure law evaluated at non-positive specific volume v=" +
                      std::to_string(v));
  }
}

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw DomainError("time must be >= 0, got " + std::to_string(t));
}

// (1+t)^(1-lambda) - 1 without cancellation for small t.
double powm1_shifted(double t, double exponent) { return std::expm1(exponent * std::log1p(t)); }

}  // namespace

PressureLaw PressureLaw::gamma_law(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  PressureLaw law;
  law.gamma_ = gamma;
  law.name_ = "gamma_law";
  return law;
}

PressureLaw PressureLaw::custom(Evaluator f, std::string name) {
  if (!f) throw DomainError("custom pressure law needs an evaluator");
  PressureLaw law;
  law.custom_ = std::move(f);
  law.name_ = std::move(name);
  return law;
}

double PressureLaw::operator()(double v) const { return deriv(v, 0); }

double PressureLaw::deriv(double v, int order) const {
  if (order < 0 || order > 3) {
    throw UnsupportedError("pressure derivative of order " + std::to_string(order) +
                           " is not supported (0..3)");
  }
  require_positive_volume(v);
  if (custom_) return custom_(v, order);
  const double g = gamma_;
  const double p = std::pow(v, -g);
  switch (order) {
    case 0:
      return p;
    case 1:
      return -g * p / v;
    case 2:
      return g * (g + 1.0) * p / (v * v);
    default:
      return -g * (g + 1.0) * (g + 2.0) * p / (v * v * v);
  }
}

double PressureLaw::sound_speed(double v) const { return std::sqrt(-deriv(v, 1)); }

double pressure(const PressureLaw& law, double v) { return law(v); }
double pressure_deriv(const PressureLaw& law, double v, int order) { return law.deriv(v, order); }
double sound_speed(const PressureLaw& law, double v) { return law.sound_speed(v); }

DampingSchedule::DampingSchedule(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {
  if (!(alpha > 0.0)) throw DomainError("damping alpha must be > 0");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("damping lambda must lie in [0, 1]");
}

double DampingSchedule::coefficient(double t) const {
  require_nonnegative_time(t);
  if (lambda_ == 0.0) return alpha_;
  return alpha_ * std::exp(-lambda_ * std::log1p(t));
}

double DampingSchedule::beta(double t) const {
  require_nonnegative_time(t);
  if (lambda_ == 1.0) return std::exp(-alpha_ * std::log1p(t));
  const double q = 1.0 - lambda_;
  return std::exp(-alpha_ / q * powm1_shifted(t, q));
}

double DampingSchedule::beta_derivative(double t) const {
  // d/dt of the closed forms above, written out separately from coefficient().
  require_nonnegative_time(t);
  if (lambda_ == 1.0) return -alpha_ * std::exp(-(alpha_ + 1.0) * std::log1p(t));
  const double q = 1.0 - lambda_;
  return -alpha_ * std::pow(1.0 + t, -lambda_) * std::exp(-alpha_ / q * powm1_shifted(t, q));
}

double DampingSchedule::integral(double t0, double t1) const {
  require_nonnegative_time(t0);
  if (t1 < t0) throw DomainError("damping integral needs t0 <= t1");
  if (lambda_ == 1.0) return alpha_ * (std::log1p(t1) - std::log1p(t0));
  const double q = 1.0 - lambda_;
  return alpha_ / q * (powm1_shifted(t1, q) - powm1_shifted(t0, q));
}

double DampingSchedule::tail(double t) const {
  require_nonnegative_time(t);
  if (lambda_ == 0.0) return -std::exp(-alpha_ * t) / alpha_;
  if (lambda_ == 1.0) {
    if (alpha_ <= 1.0) {
      throw NumericalError("B(t) diverges for lambda = 1 with alpha <= 1");
    }
    return -std::exp((1.0 - alpha_) * std::log1p(t)) / (alpha_ - 1.0);
  }

  // Substitute s = (1+tau)^(1-lambda) and factor beta(t) out:
  //   |B(t)| = beta(t)/(1-lambda) * int_0^inf e^{-c r} (S0 + r)^k dr,
  // with c = alpha/(1-lambda), k = lambda/(1-lambda), S0 = (1+t)^(1-lambda).
  const double q = 1.0 - lambda_;
  const double c = alpha_ / q;
  const double k = lambda_ / q;
  const double s0 = std::exp(q * std::log1p(t));
  auto weight = [&](double r) { return std::exp(-c * r + k * std::log1p(r / s0)); };

  // Truncate once the integrand has fallen 1e-13 below its starting value.
  double r_max = 30.0 / c;
  while (weight(r_max) > 1e-13) r_max *= 1.5;

  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0;
  const double scaled =
      Quad::integrate([&](double r) { return weight(r); }, 0.0, r_max, 12, 1e-13, &err);
  // The leftover piece beyond the truncation point sits between beta/a and 2 beta/a
  // (in scaled units); take the midpoint.
  const double t_cut = std::pow(s0 + r_max, 1.0 / q) - 1.0;
  const double rest = 1.5 * std::exp(-c * r_max) * std::pow(1.0 + t_cut, lambda_) / alpha_;
  const double beta_t = beta(t);
  return -beta_t * (scaled * std::pow(s0, k) / q + rest);
}

double damping_coefficient(const DampingSchedule& sched, double t) { return sched.coefficient(t); }
double beta_kernel(const DampingSchedule& sched, double t) { return sched.beta(t); }
double B_tail(const DampingSchedule& sched, double t) { return sched.tail(t); }

double sandwich_threshold(const DampingSchedule& sched, double t_max, int scan_points) {
  if (sched.lambda() == 0.0) return 0.0;
  std::vector<double> ts(static_cast<std::size_t>(scan_points));
  for (int i = 0; i < scan_points; ++i) {
    ts[static_cast<std::size_t>(i)] =
        std::expm1(std::log1p(t_max) * i / static_cast<double>(scan_points - 1));
  }
  double t_star = 0.0;
  for (double t : ts) {
    const double b = sched.beta(t);
    if (b < std::numeric_limits<double>::min() * 1e10) break;
    const double ratio = -sched.tail(t) / (b / sched.coefficient(t));
    if (ratio > 2.0) t_star = t;
  }
  if (t_star == 0.0) return 0.0;
  // Report the next scan point after the last violation.
  for (double t : ts) {
    if (t > t_star) return t;
  }
  return t_max;
}

FarFieldState FarFieldState::make(const PressureLaw& law, const DampingSchedule& sched,
                                  double v_plus, double u_plus) {
  if (!(v_plus > 0.0)) throw DomainError("far-field v+ must be > 0");
  FarFieldState s;
  s.v_plus = v_plus;
  s.u_plus = u_plus;
  s.kappa = -law.deriv(v_plus, 1) / sched.alpha();
  return s;
}

}  // namespace diffwave
