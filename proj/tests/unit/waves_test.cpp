#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "diffwave/correction.hpp"
#include "diffwave/errors.hpp"
#include "diffwave/waves.hpp"

using namespace diffwave;
using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;

namespace {

const PressureLaw kLaw = PressureLaw::gamma_law(1.4);

std::vector<double> log_times(double t_max, int n) {
  std::vector<double> ts;
  for (int i = 0; i < n; ++i) ts.push_back(std::expm1(std::log1p(t_max) * i / (n - 1.0)));
  return ts;
}

InitialProfile bump_profile(double v_plus, double c) {
  const Mollifier m;
  return {[=](double x) { return v_plus + c * m.value(x); }, {{1.0, 3.0}}};
}

// Cell means of v+ + c m0 on `grid`.
std::vector<double> bump_means(const Grid1D& grid, double v_plus, double c) {
  const Mollifier m;
  std::vector<double> out(grid.cells);
  for (std::size_t i = 0; i < grid.cells; ++i) out[i] = v_plus + c * m.cell_average(grid.face(i), grid.face(i + 1));
  return out;
}

double excess_mass(const WaveProfile& w, const Grid1D& grid, double t) {
  std::vector<double> means(grid.cells);
  w.sample_cell_averages(grid.faces(), t, means);
  double m = 0.0;
  for (double v : means) m += v - w.far_field().v_plus;
  return m * grid.dx();
}

}  // namespace

TEST(GaussianWave, PointValue) {
  const auto law = PressureLaw::gamma_law(1.0);
  const DampingSchedule s(1.0, 0.0);
  const auto ff = FarFieldState::make(law, s, 1.0, 0.0);
  ASSERT_DOUBLE_EQ(ff.kappa, 1.0);
  const auto w = gaussian_linear_wave(ff, 0.1, law, s);
  EXPECT_NEAR(w.eval(0.0, 0.0, WaveField::v), 1.0282095, 1e-7);
  EXPECT_EQ(wave_eval(w, 0.0, 0.0, WaveField::v), w.eval(0.0, 0.0, WaveField::v));
}

TEST(GaussianWave, WholeLineMass) {
  for (double lambda : {0.0, 0.3, 0.8}) {
    const DampingSchedule s(1.0, lambda);
    const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
    const auto w = gaussian_linear_wave(ff, 0.02, kLaw, s);
    for (double t : log_times(1000.0, 20)) {
      const double width = std::sqrt(4.0 * ff.kappa * std::pow(1.0 + t, lambda + 1.0) / (lambda + 1.0));
      const double half = Quad::integrate([&](double x) { return w.eval(x, t, WaveField::v) - 1.0; }, 0.0,
                                          40.0 * width, 10, 1e-13);
      EXPECT_NEAR(2.0 * half / 0.02, 1.0, 1e-8) << "t=" << t;
    }
  }
}

TEST(GaussianWave, LinearizedResidualIsSecondOrder) {
  const DampingSchedule s(1.0, 0.3);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  const auto w = gaussian_linear_wave(ff, 0.05, kLaw, s);
  const double t = 2.0;
  const double factor = std::pow(1.0 + t, 0.3) * kLaw.deriv(1.0, 1);
  auto residual = [&](double h) {
    double r = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = 0.5 + 0.03 * i;
      const double d2 = (w.eval(x + h, t, WaveField::v) - 2 * w.eval(x, t, WaveField::v) +
                         w.eval(x - h, t, WaveField::v)) / (h * h);
      r = std::max(r, std::abs(w.eval(x, t, WaveField::dt_v) + factor * d2));
    }
    return r;
  };
  const double r1 = residual(0.04), r2 = residual(0.02), r3 = residual(0.01);
  EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.2);
  EXPECT_NEAR(std::log2(r2 / r3), 2.0, 0.2);
}

TEST(GaussianWave, DarcyVelocityIsOddAtZero) {
  const DampingSchedule s(1.0, 0.5);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  const auto w = gaussian_linear_wave(ff, 0.02, kLaw, s);
  for (double t : {0.0, 3.0, 50.0}) EXPECT_EQ(w.eval(0.0, t, WaveField::u), 0.0);
  // ubar = kappa (1+t)^lambda d_x vbar
  EXPECT_NEAR(w.eval(1.3, 2.0, WaveField::u),
              ff.kappa * std::pow(3.0, 0.5) * w.eval(1.3, 2.0, WaveField::dx_v), 1e-16);
}

TEST(GaussianWave, RejectsLambdaOne) {
  const DampingSchedule s(2.0, 1.0);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  EXPECT_THROW(gaussian_linear_wave(ff, 0.02, kLaw, s), DomainError);
}

TEST(ConstantWave, EvaluatesToFarField) {
  const DampingSchedule s(1.0, 0.2);
  const auto ff = FarFieldState::make(kLaw, s, 1.3, 0.0);
  const auto w = constant_wave(ff, kLaw, s);
  for (double x : {0.0, 1.0, 1e4}) {
    EXPECT_EQ(w.eval(x, 7.0, WaveField::v), 1.3);
    EXPECT_EQ(w.eval(x, 7.0, WaveField::u), 0.0);
    EXPECT_EQ(w.eval(x, 7.0, WaveField::dx_v), 0.0);
  }
}

TEST(MassBudget, Examples) {
  const auto grid = Grid1D::make(20.0, 400);
  {
    const DampingSchedule s(1.0, 0.0);
    const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
    const auto d = build_dirichlet_wave_initdata({[](double) { return 1.0; }, {}}, ff, s, grid);
    EXPECT_EQ(d.budget.wave_excess, 0.0);
    for (double v : d.vbar0) EXPECT_EQ(v, 1.0);
  }
  {
    const DampingSchedule s(1.0, 0.0);
    const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
    const auto d = build_dirichlet_wave_initdata(bump_profile(1.0, 0.01), ff, s, grid);
    EXPECT_NEAR(d.budget.wave_excess, 0.01, 1e-12);
    EXPECT_NEAR(d.budget.delta0, 0.02, 1e-12);
  }
  {
    const DampingSchedule s(1.0, 0.0);
    const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.01);
    const auto d = build_dirichlet_wave_initdata({[](double) { return 1.0; }, {}}, ff, s, grid);
    EXPECT_DOUBLE_EQ(d.budget.B0, -1.0);
    EXPECT_NEAR(d.budget.wave_excess, 0.01, 1e-14);
    double m = 0.0;
    for (double v : d.vbar0) m += v - 1.0;
    EXPECT_NEAR(m * grid.dx(), 0.01, 1e-10);
  }
  {
    const DampingSchedule s(1.0, 0.5);
    const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.02);
    const auto d = build_dirichlet_wave_initdata(bump_profile(1.0, 0.03), ff, s, grid);
    EXPECT_NEAR(d.budget.initial_excess, 0.03, 1e-12);
    EXPECT_NEAR(d.budget.wave_excess, d.budget.initial_excess - 0.02 * d.budget.B0, 1e-12);
    EXPECT_NEAR(d.budget.delta0, 2.0 * d.budget.wave_excess, 1e-15);
  }
  {
    const DampingSchedule s(1.0, 0.0);
    const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
    EXPECT_THROW(build_dirichlet_wave_initdata(bump_profile(1.0, -3.0), ff, s, grid), DomainError);
  }
}

TEST(DirichletWave, ConstantDataIsFixedPoint) {
  const DampingSchedule s(1.0, 0.3);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  const auto grid = Grid1D::make(50.0, 1000);
  const std::vector<double> v0(grid.cells, 1.0), times{1.0, 10.0, 100.0};
  const auto w = dirichlet_diffusion_wave(v0, ff, kLaw, s, grid, times);
  for (double t : times) {
    for (double x : {0.0, 3.3, 49.0}) EXPECT_LE(std::abs(w.eval(x, t, WaveField::v) - 1.0), 1e-14);
  }
}

TEST(DirichletWave, ConservesMassAndDecays) {
  for (double lambda : {0.0, 0.5}) {
    const DampingSchedule s(1.0, lambda);
    const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
    // keep the spreading wave well inside the grid: s(1000) is about 2e4 at lambda = 1/2
    const double length = lambda == 0.0 ? 400.0 : 1600.0;
    const auto grid = Grid1D::make(length, static_cast<std::size_t>(length * 10));
    const auto v0 = bump_means(grid, 1.0, 0.01);
    const auto times = log_times(1000.0, 40);
    const auto w = dirichlet_diffusion_wave(v0, ff, kLaw, s, grid, times);
    const double m0 = excess_mass(w, grid, 0.0);
    EXPECT_NEAR(m0, 0.01, 1e-10);
    std::vector<double> t_ok, monitor;
    double prev_sup = INFINITY;
    for (double t : times) {
      EXPECT_NEAR(excess_mass(w, grid, t) / m0, 1.0, 1e-6) << "t=" << t;
      std::vector<double> means(grid.cells);
      w.sample_cell_averages(grid.faces(), t, means);
      double sup = 0.0;
      for (double v : means) sup = std::max(sup, std::abs(v - 1.0));
      EXPECT_LE(sup, prev_sup * (1 + 1e-12));
      prev_sup = sup;
      t_ok.push_back(t);
      monitor.push_back(std::pow(1.0 + t, (lambda + 1.0) / 2.0) * sup);
    }
    // final decade of (1+t): no upward trend
    const double lo = std::log(1001.0) - std::log(10.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < t_ok.size(); ++i) {
      const double x = std::log1p(t_ok[i]);
      if (x < lo) continue;
      const double y = std::log(monitor[i]);
      sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
    }
    EXPECT_LE((n * sxy - sx * sy) / (n * sxx - sx * sx), 0.1);
  }
}

TEST(DirichletWave, SmallAmplitudeMatchesHeatKernel) {
  for (double lambda : {0.0, 0.3}) {
    const DampingSchedule s(1.0, lambda);
    const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
    const auto grid = Grid1D::make(300.0, 3000);
    const double c = 1e-3;
    const double t = 100.0;
    const auto w = dirichlet_diffusion_wave(bump_means(grid, 1.0, c), ff, kLaw, s, grid,
                                            std::vector<double>{t});
    const double sr = rescaled_time(t, lambda);
    const Mollifier m;
    auto heat = [&](double x) {
      const double four_ks = 4.0 * ff.kappa * sr;
      auto g = [&](double y) {
        return m.value(y) * (std::exp(-(x - y) * (x - y) / four_ks) + std::exp(-(x + y) * (x + y) / four_ks));
      };
      return c * Quad::integrate(g, 1.0, 3.0, 8, 1e-13) / std::sqrt(std::numbers::pi * four_ks);
    };
    double err = 0.0;
    for (int i = 0; i <= 300; ++i) {
      const double x = 0.5 * i;
      err = std::max(err, std::abs(w.eval(x, t, WaveField::v) - 1.0 - heat(x)));
    }
    EXPECT_LE(err, 1e-2 * c) << "lambda=" << lambda;
  }
}

TEST(DirichletWave, DarcyVelocityAndRangeChecks) {
  const DampingSchedule s(1.0, 0.0);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  const auto grid = Grid1D::make(100.0, 1000);
  const auto w = dirichlet_diffusion_wave(bump_means(grid, 1.0, 0.01), ff, kLaw, s, grid,
                                          std::vector<double>{5.0, 10.0});
  // homogeneous Neumann data for vbar: ubar(0) = 0
  EXPECT_NEAR(w.eval(0.0, 10.0, WaveField::u), 0.0, 1e-12);
  // ubar = -(1/alpha) p'(vbar) d_x vbar
  const double x = 4.0, v = w.eval(x, 10.0, WaveField::v);
  EXPECT_NEAR(w.eval(x, 10.0, WaveField::u), -kLaw.deriv(v, 1) * w.eval(x, 10.0, WaveField::dx_v), 1e-14);
  EXPECT_THROW(w.eval(1.0, 11.0, WaveField::v), DomainError);
  EXPECT_THROW(w.eval(-1.0, 5.0, WaveField::v), DomainError);
  // interior times interpolate
  EXPECT_NO_THROW(w.eval(1.0, 7.5, WaveField::v));
  // identical queries are bit-identical
  EXPECT_EQ(w.eval(2.5, 7.5, WaveField::v), w.eval(2.5, 7.5, WaveField::v));
}

TEST(DirichletWave, RejectsCoarseGrids) {
  const DampingSchedule s(1.0, 0.0);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  const auto grid = Grid1D::make(100.0, 500);
  EXPECT_THROW(dirichlet_diffusion_wave(bump_means(grid, 1.0, 0.01), ff, kLaw, s, grid,
                                        std::vector<double>{1.0}),
               DomainError);
}

TEST(SelfSimilar, TrivialBoundaryValue) {
  const DampingSchedule s(1.0, 0.4);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  const auto w = neumann_selfsimilar_profile(1.0, ff, kLaw, s);
  EXPECT_EQ(w.selfsimilar_payload()->initial_slope, 0.0);
  for (double x : {0.0, 2.0, 50.0}) EXPECT_EQ(w.eval(x, 3.0, WaveField::v), 1.0);
}

TEST(SelfSimilar, SmallAmplitudeMatchesErfc) {
  for (double lambda : {0.0, 0.5}) {
    for (double amp : {1e-3, -1e-3}) {
      const DampingSchedule s(1.0, lambda);
      const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
      const auto w = neumann_selfsimilar_profile(1.0 + amp, ff, kLaw, s);
      const double k = std::sqrt((lambda + 1.0) / (4.0 * ff.kappa));
      const double xi_max = w.selfsimilar_payload()->xi_max;
      double err = 0.0;
      for (int i = 0; i <= 1000; ++i) {
        const double xi = xi_max * i / 1000.0;
        err = std::max(err, std::abs(w.eval(xi, 0.0, WaveField::v) - 1.0 - amp * std::erfc(k * xi)));
      }
      EXPECT_LE(err, 1e-2 * std::abs(amp));
    }
  }
}

TEST(SelfSimilar, MonotoneAndMeetsFarField) {
  const DampingSchedule s(1.0, 0.3);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  for (double vb : {0.8, 1.3}) {
    ShootingOptions opt;
    const auto w = neumann_selfsimilar_profile(vb, ff, kLaw, s, opt);
    const auto* tab = w.selfsimilar_payload();
    EXPECT_EQ(tab->phi.front(), vb);
    EXPECT_LE(std::abs(tab->phi.back() - 1.0), opt.tol);
    for (std::size_t i = 1; i < tab->phi.size(); ++i) {
      if (vb > 1.0) {
        EXPECT_LE(tab->phi[i], tab->phi[i - 1]);
      } else {
        EXPECT_GE(tab->phi[i], tab->phi[i - 1]);
      }
    }
  }
}

TEST(SelfSimilar, OdeResidualAtDoubledResolution) {
  // (p(phi))'' - (alpha (lambda+1)/2) xi phi' with q = p'(phi) phi' differenced at
  // fourth order on a table built at twice the default resolution.
  const double alpha = 1.0, lambda = 0.3;
  const DampingSchedule s(alpha, lambda);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  ShootingOptions fine;
  fine.table_intervals = 2 * ShootingOptions{}.table_intervals;
  const auto w = neumann_selfsimilar_profile(1.2, ff, kLaw, s, fine);
  const auto* tab = w.selfsimilar_payload();
  const std::size_t n = tab->phi.size();
  const double h = tab->xi_max / static_cast<double>(n - 1);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = kLaw.deriv(tab->phi[i], 1) * tab->dphi[i];
  double res = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double dq = (-q[i + 2] + 8 * q[i + 1] - 8 * q[i - 1] + q[i - 2]) / (12 * h);
    const double xi = h * static_cast<double>(i);
    res = std::max(res, std::abs(dq - 0.5 * alpha * (lambda + 1.0) * xi * tab->dphi[i]));
  }
  EXPECT_LE(res, 10 * fine.tol);
}

TEST(SelfSimilar, DarcyFieldsAndBoundarySlope) {
  const DampingSchedule s(1.0, 0.4);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  const auto w = neumann_selfsimilar_profile(1.1, ff, kLaw, s);
  const double t = 5.0, h = 1e-3;
  // d_x ubar (0, t) = 0
  const double u0 = w.eval(0.0, t, WaveField::u), u1 = w.eval(h, t, WaveField::u),
               u2 = w.eval(2 * h, t, WaveField::u);
  const double slope = (-3 * u0 + 4 * u1 - u2) / (2 * h);
  EXPECT_LE(std::abs(slope), 1e-4 * std::abs(u0));
  // mass equation vbar_t = ubar_x in the interior
  for (double x : {0.5, 2.0, 6.0}) {
    const double ux = (w.eval(x + h, t, WaveField::u) - w.eval(x - h, t, WaveField::u)) / (2 * h);
    EXPECT_NEAR(w.eval(x, t, WaveField::dt_v), ux, 1e-6 * std::abs(u0));
  }
}

TEST(ProfileIo, RoundTripIsBitExact) {
  const DampingSchedule s(1.0, 0.3);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  const auto grid = Grid1D::make(60.0, 600);
  std::vector<WaveProfile> profiles{
      constant_wave(ff, kLaw, s), gaussian_linear_wave(ff, 0.02, kLaw, s),
      neumann_selfsimilar_profile(1.1, ff, kLaw, s),
      dirichlet_diffusion_wave(bump_means(grid, 1.0, 0.01), ff, kLaw, s, grid, std::vector<double>{1.0, 4.0})};
  for (const auto& p : profiles) {
    const auto back = import_profile(io::parse_table(io::format_table(export_profile(p))));
    EXPECT_EQ(back.regime(), p.regime());
    for (double x : {0.0, 0.7, 2.5, 9.0}) {
      for (double t : {1.0, 2.0, 4.0}) {
        for (auto f : {WaveField::v, WaveField::u, WaveField::dx_v, WaveField::dt_v}) {
          EXPECT_EQ(back.eval(x, t, f), p.eval(x, t, f)) << to_string(p.regime());
        }
      }
    }
  }
}

TEST(ProfileIo, RejectsForeignFiles) {
  EXPECT_THROW(import_profile(io::parse_table("# something-else v1\na=1\n1 2\n")), std::invalid_argument);
  const DampingSchedule s(1.0, 0.0);
  auto custom = PressureLaw::custom([](double v, int) { return v; }, "x");
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  EXPECT_THROW(export_profile(constant_wave(ff, custom, s)), UnsupportedError);
}
