#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "diffwave/errors.hpp"
#include "diffwave/waves.hpp"

namespace diffwave {

namespace {

// (p(phi))'' = c xi phi' as a first-order system in (phi, q = p'(phi) phi').
struct ProfileOde {
  const PressureLaw& law;
  double c;

  bool rhs(double xi, double phi, double q, double& dphi, double& dq) const {
    if (!(phi > 0.0) || !std::isfinite(phi)) return false;
    const double dp = law.deriv(phi, 1);
    dphi = q / dp;
    dq = c * xi * dphi;
    return std::isfinite(dphi) && std::isfinite(dq);
  }

  // One RK4 step; false when the trajectory leaves the admissible region.
  bool rk4(double xi, double h, double& phi, double& q) const {
    double k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
    if (!rhs(xi, phi, q, k1p, k1q)) return false;
    if (!rhs(xi + 0.5 * h, phi + 0.5 * h * k1p, q + 0.5 * h * k1q, k2p, k2q)) return false;
    if (!rhs(xi + 0.5 * h, phi + 0.5 * h * k2p, q + 0.5 * h * k2q, k3p, k3q)) return false;
    if (!rhs(xi + h, phi + h * k3p, q + h * k3q, k4p, k4q)) return false;
    phi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    return std::isfinite(phi) && phi > 0.0;
  }
};

struct Shot {
  bool finite = true;
  double terminal = 0.0;
};

}  // namespace

WaveProfile neumann_selfsimilar_profile(double v_boundary, const FarFieldState& far_field,
                                        const PressureLaw& law, const DampingSchedule& sched,
                                        const ShootingOptions& options) {
  const double lam = sched.lambda();
  if (lam >= 1.0) throw DomainError("the diffusion-wave construction requires lambda in [0, 1)");
  if (!(v_boundary > 0.0)) throw DomainError("boundary volume v0(0) must be > 0");
  const double vp = far_field.v_plus;
  const double alpha = sched.alpha();
  if (options.table_intervals < 2 || options.substeps < 1) {
    throw std::invalid_argument("shooting table needs >= 2 intervals and >= 1 substep");
  }

  double xi_max = options.xi_max;
  if (xi_max <= 0.0) {
    const double kappa = std::max(-law.deriv(v_boundary, 1), -law.deriv(vp, 1)) / alpha;
    xi_max = 12.0 / std::sqrt((lam + 1.0) / (4.0 * kappa));
  }
  const std::size_t n = options.table_intervals;
  const double h = xi_max / static_cast<double>(n);
  const double hs = h / options.substeps;

  WaveProfile::SelfSimilar tab;
  tab.v_boundary = v_boundary;
  tab.xi_max = xi_max;
  if (v_boundary == vp) {
    tab.phi.assign(n + 1, vp);
    tab.dphi.assign(n + 1, 0.0);
    return WaveProfile::from_table(far_field, law, sched, std::move(tab));
  }

  const ProfileOde ode{law, 0.5 * alpha * (lam + 1.0)};
  auto shoot = [&](double slope, std::vector<double>* phis, std::vector<double>* qs) {
    double phi = v_boundary;
    double q = law.deriv(v_boundary, 1) * slope;
    if (phis) {
      phis->assign(1, phi);
      qs->assign(1, q);
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (int m = 0; m < options.substeps; ++m) {
        const double xi = static_cast<double>(j) * h + m * hs;
        if (!ode.rk4(xi, hs, phi, q)) return Shot{false, 0.0};
      }
      if (phis) {
        phis->push_back(phi);
        qs->push_back(q);
      }
    }
    return Shot{true, phi};
  };

  // Sign of phi(xi_max) - v+ when the slope is too shallow to reach v+.
  const double short_sign = v_boundary > vp ? 1.0 : -1.0;
  auto miss = [&](double slope) {
    const Shot s = shoot(slope, nullptr, nullptr);
    if (!s.finite) return -short_sign * std::numeric_limits<double>::infinity();
    return s.terminal - vp;
  };

  const double linear_slope = (vp - v_boundary) * std::sqrt((lam + 1.0) / (std::numbers::pi * far_field.kappa));
  double lo = 0.0;
  double hi = linear_slope;
  double f_hi = miss(hi);
  int expansions = 0;
  while (f_hi * short_sign > 0.0) {
    if (++expansions > 60) {
      throw NumericalError("shooting bracket not found for v0(0)=" + std::to_string(v_boundary) +
                           "; increase xi_max or reduce the amplitude");
    }
    lo = hi;
    hi *= 2.0;
    f_hi = miss(hi);
  }

  double slope = hi;
  double f = f_hi;
  for (int it = 0; it < 200 && !(std::abs(f) <= options.tol); ++it) {
    slope = 0.5 * (lo + hi);
    if (slope == lo || slope == hi) break;
    f = miss(slope);
    if (f * short_sign > 0.0) {
      lo = slope;
    } else {
      hi = slope;
    }
  }
  if (!(std::abs(f) <= options.tol)) {
    throw NumericalError("shooting did not reach |phi(xi_max) - v+| <= tol; terminal miss " +
                         std::to_string(f));
  }

  std::vector<double> phis, qs;
  shoot(slope, &phis, &qs);
  tab.initial_slope = slope;
  tab.phi = phis;
  tab.dphi.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) tab.dphi[j] = qs[j] / law.deriv(phis[j], 1);

  for (std::size_t j = 0; j < n; ++j) {
    if ((tab.phi[j + 1] - tab.phi[j]) * short_sign > 0.0) {
      throw NumericalError("self-similar profile is not monotone near xi=" +
                           std::to_string(static_cast<double>(j) * h));
    }
  }
  // Fritsch-Carlson: keep the Hermite interpolant monotone.
  for (std::size_t j = 0; j < n; ++j) {
    const double secant = (tab.phi[j + 1] - tab.phi[j]) / h;
    if (secant == 0.0) {
      tab.dphi[j] = 0.0;
      tab.dphi[j + 1] = 0.0;
      continue;
    }
    double a = tab.dphi[j] / secant;
    double b = tab.dphi[j + 1] / secant;
    if (a < 0.0) tab.dphi[j] = a = 0.0;
    if (b < 0.0) tab.dphi[j + 1] = b = 0.0;
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      tab.dphi[j] = tau * a * secant;
      tab.dphi[j + 1] = tau * b * secant;
    }
  }
  return WaveProfile::from_table(far_field, law, sched, std::move(tab));
}

}  // namespace diffwave
