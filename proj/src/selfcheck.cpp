#include "diffwave/selfcheck.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "diffwave/correction.hpp"
#include "diffwave/model.hpp"
#include "diffwave/waves.hpp"

namespace diffwave {

namespace {

std::vector<double> log_times(double t_max, int n) {
  std::vector<double> ts;
  for (int i = 0; i < n; ++i) ts.push_back(std::expm1(std::log1p(t_max) * i / (n - 1.0)));
  return ts;
}

CheckResult make(std::string name, double measured, double limit) {
  return {std::move(name), measured <= limit, measured, limit};
}

}  // namespace

std::vector<CheckResult> run_identity_checks() {
  std::vector<CheckResult> out;
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;

  double ode = 0.0, tail = 0.0;
  for (double alpha : {1.0, 2.0}) {
    for (double lambda : {0.0, 0.3, 0.6, 0.9, 1.0}) {
      if (lambda == 1.0 && alpha <= 1.0) continue;
      const DampingSchedule s(alpha, lambda);
      const auto ts = log_times(50.0, 100);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const double b = s.beta(ts[i]);
        ode = std::max(ode, std::abs(s.beta_derivative(ts[i]) + s.coefficient(ts[i]) * b) /
                                std::max(b, 1e-300));
        if (i + 1 < ts.size()) {
          const double ib = Quad::integrate([&](double x) { return s.beta(x); }, ts[i], ts[i + 1], 6, 1e-14);
          tail = std::max(tail, std::abs(s.tail(ts[i + 1]) - s.tail(ts[i]) - ib));
        }
      }
    }
  }
  out.push_back(make("beta' + a beta = 0 (relative)", ode, 1e-12));
  out.push_back(make("B(t2) - B(t1) = int beta", tail, 1e-12));

  double cons = 0.0, damp = 0.0;
  const DampingSchedule s(1.0, 0.5);
  for (const auto& pair : {CorrectionPair::dirichlet(0.01, s), CorrectionPair::neumann(0.01, 0.02, s)}) {
    for (int it = 0; it < 100; ++it) {
      const double t = std::expm1(std::log1p(100.0) * it / 99.0);
      for (int ix = 0; ix < 200; ++ix) {
        const double x = 4.0 * ix / 199.0;
        cons = std::max(cons, std::abs(pair.eval(x, t, CorrectionField::dt_v_hat) -
                                       pair.eval(x, t, CorrectionField::dx_u_hat)));
        const double u = pair.eval(x, t, CorrectionField::u_hat);
        if (u != 0.0) {
          damp = std::max(damp, std::abs(pair.eval(x, t, CorrectionField::dt_u_hat) +
                                         s.coefficient(t) * u) / std::abs(u));
        }
      }
    }
  }
  out.push_back(make("d_t vhat - d_x uhat = 0", cons, 1e-12));
  out.push_back(make("d_t uhat + a uhat = 0 (relative)", damp, 1e-12));

  const auto law = PressureLaw::gamma_law(1.4);
  const DampingSchedule sg(1.0, 0.3);
  const auto ff = FarFieldState::make(law, sg, 1.0, 0.0);
  const double delta0 = 0.02;
  const auto wave = gaussian_linear_wave(ff, delta0, law, sg);
  double mass = 0.0;
  for (double t : log_times(1000.0, 20)) {
    const double width = std::sqrt(4.0 * ff.kappa * std::pow(1.0 + t, 1.3) / 1.3);
    const double m = 2.0 * Quad::integrate([&](double x) { return wave.eval(x, t, WaveField::v) - 1.0; },
                                           0.0, 40.0 * width, 10, 1e-13);
    mass = std::max(mass, std::abs(m - delta0) / delta0);
  }
  out.push_back(make("Gaussian wave whole-line mass = delta0 (relative)", mass, 1e-8));

  double erfc_err = 0.0;
  for (double lambda : {0.0, 0.5}) {
    const DampingSchedule sn(1.0, lambda);
    const auto ffn = FarFieldState::make(law, sn, 1.0, 0.0);
    const double amp = 1e-3;
    const auto prof = neumann_selfsimilar_profile(1.0 + amp, ffn, law, sn);
    const double k = std::sqrt((lambda + 1.0) / (4.0 * ffn.kappa));
    const auto* tab = prof.selfsimilar_payload();
    for (int i = 0; i <= 400; ++i) {
      const double xi = tab->xi_max * i / 400.0;
      erfc_err = std::max(erfc_err, std::abs(prof.eval(xi, 0.0, WaveField::v) - 1.0 - amp * std::erfc(xi * k)) / amp);
    }
  }
  out.push_back(make("self-similar profile vs erfc (relative to amplitude)", erfc_err, 1e-2));
  return out;
}

}  // namespace diffwave
