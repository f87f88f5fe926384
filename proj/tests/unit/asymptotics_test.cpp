#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "diffwave/asymptotics.hpp"
#include "diffwave/errors.hpp"

using namespace diffwave;
using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;

namespace {

const PressureLaw kLaw = PressureLaw::gamma_law(1.4);

std::vector<double> log_times(double t_max, int n) {
  std::vector<double> ts;
  for (int i = 0; i < n; ++i) ts.push_back(std::expm1(std::log1p(t_max) * i / (n - 1.0)));
  return ts;
}

std::vector<double> power_series(const std::vector<double>& ts, double c, double p) {
  std::vector<double> v;
  for (double t : ts) v.push_back(c * std::pow(1.0 + t, -p));
  return v;
}

double omega_tilde(double x) { return std::exp(-(x - 12.0) * (x - 12.0) / 4.0); }
double omega_tilde_x(double x) { return -0.5 * (x - 12.0) * omega_tilde(x); }
double omega_tilde_xx(double x) { return (0.25 * (x - 12.0) * (x - 12.0) - 0.5) * omega_tilde(x); }
double z_tilde(double x) { return 0.3 * std::exp(-(x - 9.0) * (x - 9.0)); }

struct RoundTrip {
  double omega = 0.0, omega_x = 0.0, omega_xx = 0.0, z = 0.0;
};

// Builds v = vbar + vhat + d_x omega~, u = ubar + uhat + z~ in cell means and measures
// how well the fields come back.
RoundTrip round_trip(std::size_t cells) {
  const DampingSchedule s(1.0, 0.3);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.01);
  const auto wave = gaussian_linear_wave(ff, 0.02, kLaw, s);
  const auto corr = CorrectionPair::dirichlet(0.01, s);
  const auto grid = Grid1D::make(40.0, cells);
  const double t = 3.0, dx = grid.dx();
  const auto faces = grid.faces(), centers = grid.centers();
  State st;
  st.t = t;
  st.v.resize(cells);
  st.u.resize(cells);
  std::vector<double> vbar(cells), vhat(cells), ubar(cells), uhat(cells);
  wave.sample_cell_averages(faces, t, vbar);
  corr.sample_v_cell_averages(faces, t, vhat);
  wave.sample(centers, t, WaveField::u, ubar);
  corr.sample(centers, t, CorrectionField::u_hat, uhat);
  for (std::size_t i = 0; i < cells; ++i) {
    st.v[i] = vbar[i] + vhat[i] + (omega_tilde(faces[i + 1]) - omega_tilde(faces[i])) / dx;
    st.u[i] = ubar[i] + uhat[i] + z_tilde(centers[i]);
  }
  const auto pf = perturbation_fields(st, grid, wave, corr, Boundary::dirichlet);
  RoundTrip e;
  for (std::size_t i = 0; i < cells; ++i) {
    const double x = centers[i];
    e.omega = std::max(e.omega, std::abs(pf.omega[i] - omega_tilde(x)));
    e.omega_x = std::max(e.omega_x, std::abs(pf.omega_x[i] - omega_tilde_x(x)));
    e.omega_xx = std::max(e.omega_xx, std::abs(pf.omega_xx[i] - omega_tilde_xx(x)));
    e.z = std::max(e.z, std::abs(pf.z[i] - z_tilde(x)));
  }
  return e;
}

}  // namespace

TEST(Norm, Examples) {
  const auto grid = Grid1D::make(10.0, 100);
  std::vector<double> f(100, 0.0);
  for (auto k : {NormKind::L1, NormKind::L2, NormKind::Linf}) EXPECT_EQ(norm(f, grid, k), 0.0);
  f[17] = 1.0;
  EXPECT_DOUBLE_EQ(norm(f, grid, NormKind::Linf), 1.0);
  EXPECT_DOUBLE_EQ(norm(f, grid, NormKind::L1), 0.1);
  EXPECT_DOUBLE_EQ(norm(f, grid, NormKind::L2), std::sqrt(0.1));
  EXPECT_THROW(norm(std::vector<double>(3), grid, NormKind::L1), std::invalid_argument);
}

TEST(Norm, HalfLineGaussian) {
  // ||e^{-x^2}||_{L2(0, inf)}^2 = int_0^inf e^{-2x^2}, taken by quadrature.
  const double ref_sq = Quad::integrate([](double x) { return std::exp(-2 * x * x); }, 0.0, 20.0, 10, 1e-15);
  EXPECT_NEAR(ref_sq, std::sqrt(std::numbers::pi / 8.0), 1e-14);
  const auto grid = Grid1D::make(20.0, 20000);
  std::vector<double> f;
  for (double x : grid.centers()) f.push_back(std::exp(-x * x));
  EXPECT_NEAR(norm(f, grid, NormKind::L2), std::sqrt(ref_sq), 1e-8);
}

TEST(FitDecay, ExactPowerLaw) {
  std::vector<double> ts;
  for (int i = 0; i < 20; ++i) ts.push_back(10.0 * std::pow(100.0, i / 19.0));
  const auto f = fit_decay(ts, power_series(ts, 7.0, 1.25), 0.0, 1e9);
  EXPECT_NEAR(f.exponent, 1.25, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_EQ(f.count, 20u);
  const auto c = fit_decay(ts, std::vector<double>(20, 3.0), 0.0, 1e9);
  EXPECT_EQ(c.exponent, 0.0);
}

TEST(FitDecay, CorruptedSeries) {
  std::vector<double> ts, vs;
  for (int i = 0; i < 40; ++i) {
    const double t = 100.0 * std::pow(20.0, i / 39.0);
    ts.push_back(t);
    vs.push_back(std::pow(1.0 + t, -0.75) * (1.0 + 5.0 / (1.0 + t)));
  }
  EXPECT_NEAR(fit_decay(ts, vs, 100.0, 2000.0).exponent, 0.75, 0.02);
}

TEST(FitDecay, ScaleInvariantAndExactAcrossExponents) {
  const auto ts = log_times(3000.0, 50);
  for (double p : {0.3, 0.75, 1.2, 2.5}) {
    const auto a = fit_decay(ts, power_series(ts, 1.0, p), 10.0, 3000.0);
    const auto b = fit_decay(ts, power_series(ts, 1e-7, p), 10.0, 3000.0);
    EXPECT_NEAR(a.exponent, p, 1e-10);
    EXPECT_NEAR(a.exponent, b.exponent, 1e-10);
  }
}

TEST(FitDecay, Errors) {
  const auto ts = log_times(100.0, 20);
  auto vs = power_series(ts, 1.0, 1.0);
  EXPECT_THROW(fit_decay(ts, vs, 50.0, 60.0), std::invalid_argument);
  vs[15] = 0.0;
  EXPECT_THROW(fit_decay(ts, vs, 0.0, 100.0), DomainError);
}

TEST(Boundedness, Examples) {
  const auto ts = log_times(2000.0, 64);
  const auto ok = boundedness_check(ts, power_series(ts, 1.0, 1.3), 1.3);
  EXPECT_TRUE(ok.pass);
  EXPECT_NEAR(ok.final_decade_slope, 0.0, 1e-12);
  EXPECT_NEAR(ok.supremum, 1.0, 1e-12);
  const auto bad = boundedness_check(ts, power_series(ts, 1.0, 0.8), 1.3);
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.final_decade_slope, 0.5, 1e-12);
  EXPECT_TRUE(boundedness_check(ts, power_series(ts, 1.0, 1.21), 1.3).pass);
}

TEST(PredictedRate, Examples) {
  EXPECT_DOUBLE_EQ(*predicted_rate(DecayRegime::dirichlet, Quantity::v_Linf, 0, 0.0).exponent, 0.75);
  EXPECT_DOUBLE_EQ(*predicted_rate(DecayRegime::dirichlet, Quantity::u_Linf, 0, 0.8).exponent, 1.2);
  EXPECT_DOUBLE_EQ(*predicted_rate(DecayRegime::dirichlet, Quantity::u_Linf, 0, 0.0).exponent, 1.25);
  EXPECT_DOUBLE_EQ(*predicted_rate(DecayRegime::dirichlet, Quantity::v_Linf, 0, 0.8).exponent, 1.1);
  EXPECT_NEAR(*predicted_rate(DecayRegime::dirichlet, Quantity::v_Linf, 0, 0.6).exponent, 1.15, 1e-15);
  EXPECT_DOUBLE_EQ(*predicted_rate(DecayRegime::dirichlet, Quantity::omega_k_L2, 2, 0.2).exponent, 1.2);
  EXPECT_DOUBLE_EQ(*predicted_rate(DecayRegime::dirichlet, Quantity::omegat_k_L2, 1, 0.2).exponent, 1.6);
  EXPECT_FALSE(predicted_rate(DecayRegime::neumann, Quantity::v_Linf, 0, 0.5).exponent);
  EXPECT_THROW(predicted_rate(DecayRegime::dirichlet, Quantity::v_Linf, 0, 1.0), DomainError);
  EXPECT_THROW(predicted_rate(DecayRegime::dirichlet, Quantity::omega_k_L2, 4, 0.2), std::invalid_argument);
}

TEST(PredictedRate, ContinuousAtCutOffs) {
  const double h = 1e-9;
  for (auto q : {Quantity::v_Linf, Quantity::u_Linf}) {
    const double below = *predicted_rate(DecayRegime::dirichlet, q, 0, 0.6 - h).exponent;
    const double above = *predicted_rate(DecayRegime::dirichlet, q, 0, 0.6 + h).exponent;
    const double crit = *predicted_rate(DecayRegime::dirichlet, q, 0, 0.6).exponent;
    EXPECT_NEAR(below, above, 1e-8);
    EXPECT_NEAR(crit + 0.05, below, 1e-8);
  }
  for (auto regime : {DecayRegime::dirichlet, DecayRegime::neumann}) {
    const double cut = regime == DecayRegime::dirichlet ? 0.6 : 1.0 / 7.0;
    for (int k = 0; k < 4; ++k) {
      const auto lo = predicted_rate(regime, Quantity::omega_k_L2, k, cut - h);
      const auto hi = predicted_rate(regime, Quantity::omega_k_L2, k, cut + h);
      const auto at = predicted_rate(regime, Quantity::omega_k_L2, k, cut);
      EXPECT_NEAR(*lo.exponent, *hi.exponent, 1e-8) << to_string(regime) << " k=" << k;
      EXPECT_NEAR(*at.exponent + 0.5 * at.epsilon_slack, *lo.exponent, 1e-8);
    }
  }
  // the constant-state table has no cut-off
  EXPECT_EQ(theorem_weights(DecayRegime::neumann_constant, 0.9).branch,
            theorem_weights(DecayRegime::neumann_constant, 0.0).branch);
}

TEST(WeightTable, SupercriticalIntegratedWeight) {
  const auto w = theorem_weights(DecayRegime::dirichlet, 0.8);
  ASSERT_TRUE(w.b);
  EXPECT_NEAR(*w.b, 0.5 * ((1.5 - 1.2) + 0.8), 1e-15);
  EXPECT_THROW(theorem_weights(DecayRegime::dirichlet, 0.8, {0.05, 0.9}), DomainError);
  EXPECT_THROW(theorem_weights(DecayRegime::dirichlet, 0.8, {0.05, 0.2}), DomainError);
  EXPECT_NO_THROW(theorem_weights(DecayRegime::dirichlet, 0.8, {0.05, 0.5}));
}

TEST(WeightedEnergy, SyntheticSeriesAreFlat) {
  for (auto [regime, lambda] : {std::pair{DecayRegime::dirichlet, 0.3}, {DecayRegime::dirichlet, 0.8},
                                {DecayRegime::neumann, 0.5}, {DecayRegime::neumann_constant, 0.5}}) {
    const auto table = theorem_weights(regime, lambda);
    std::vector<NormRecord> recs;
    for (double t : log_times(1000.0, 64)) {
      NormRecord r;
      r.t = t;
      for (int k = 0; k < 4; ++k) r.omega_sq[k] = std::pow(1.0 + t, -table.omega[k]);
      for (int k = 0; k < 3; ++k) r.z_sq[k] = std::pow(1.0 + t, -table.omega_t[k]);
      recs.push_back(r);
    }
    for (const auto& s : weighted_energy_series(recs, table)) {
      if (s.integrated) continue;
      for (double w : s.weighted) EXPECT_NEAR(w, 1.0, 1e-12) << s.name;
    }
  }
}

TEST(WeightedEnergy, ZeroAndUnweighted) {
  const auto table = theorem_weights(DecayRegime::dirichlet, 0.0);
  std::vector<NormRecord> recs(10);
  for (int i = 0; i < 10; ++i) recs[i].t = i;
  for (const auto& s : weighted_energy_series(recs, table)) {
    for (double w : s.weighted) EXPECT_EQ(w, 0.0) << s.name;
  }
  for (int i = 0; i < 10; ++i) recs[i].omega_sq[0] = 2.0 + i;
  const auto series = weighted_energy_series(recs, table);
  EXPECT_EQ(series[0].name, "omega_0");
  for (int i = 0; i < 10; ++i) EXPECT_EQ(series[0].weighted[i], 2.0 + i);
  // trapezoid integral of (1+t)^1 * z_sq with z_sq = 1 over [0, 9]: 9 + 81/2
  for (auto& r : recs) r.z_sq[0] = 1.0;
  for (const auto& s : weighted_energy_series(recs, table)) {
    if (s.name == "int_omega_t_0") {
      EXPECT_NEAR(s.raw.back(), 9.0 + 40.5, 1e-12);
    }
  }
}

TEST(PerturbationFields, ExactCancellation) {
  const DampingSchedule s(1.0, 0.5);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.01);
  const auto wave = gaussian_linear_wave(ff, 0.02, kLaw, s);
  const auto corr = CorrectionPair::dirichlet(0.01, s);
  const auto grid = Grid1D::make(30.0, 600);
  State st;
  st.t = 4.0;
  st.v.resize(600);
  st.u.resize(600);
  std::vector<double> vhat(600), uhat(600);
  wave.sample_cell_averages(grid.faces(), st.t, st.v);
  corr.sample_v_cell_averages(grid.faces(), st.t, vhat);
  wave.sample(grid.centers(), st.t, WaveField::u, st.u);
  corr.sample(grid.centers(), st.t, CorrectionField::u_hat, uhat);
  for (int i = 0; i < 600; ++i) {
    st.v[i] += vhat[i];
    st.u[i] += uhat[i];
  }
  const auto pf = perturbation_fields(st, grid, wave, corr, Boundary::dirichlet);
  const auto rec = norm_record(pf, grid);
  for (double x : rec.omega_sq) EXPECT_LE(std::sqrt(x), 1e-8);
  for (double x : rec.z_sq) EXPECT_LE(std::sqrt(x), 1e-8);
  EXPECT_LE(std::abs(pf.mass), 1e-12);
}

TEST(PerturbationFields, ConstantWaveCarriesCorrectionMass) {
  const DampingSchedule s(1.0, 0.5);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.01);
  const auto wave = constant_wave(ff, kLaw, s);
  const auto corr = CorrectionPair::neumann(0.01, 0.04, s);
  const auto grid = Grid1D::make(20.0, 400);
  for (double t : {0.0, 2.0, 10.0}) {
    State st{std::vector<double>(400, 1.0), std::vector<double>(400, 0.01), t};
    const auto pf = perturbation_fields(st, grid, wave, corr, Boundary::neumann);
    EXPECT_NEAR(std::abs(pf.mass), std::abs(corr.amplitude() * s.tail(t)), 1e-13);
  }
}

TEST(PerturbationFields, SynthesisRoundTripIsSecondOrder) {
  const auto coarse = round_trip(1000), fine = round_trip(2000);
  EXPECT_LE(coarse.z, 1e-15);
  EXPECT_LE(coarse.omega, 1e-3);
  for (auto [c, f] : {std::pair{coarse.omega, fine.omega}, {coarse.omega_x, fine.omega_x},
                      {coarse.omega_xx, fine.omega_xx}}) {
    EXPECT_NEAR(std::log2(c / f), 2.0, 0.2);
  }
}

TEST(PerturbationFields, RegimeMismatch) {
  const DampingSchedule s(1.0, 0.5);
  const auto ff = FarFieldState::make(kLaw, s, 1.0, 0.0);
  const auto grid = Grid1D::make(20.0, 100);
  const State st{std::vector<double>(100, 1.0), std::vector<double>(100, 0.0), 1.0};
  EXPECT_THROW(perturbation_fields(st, grid, neumann_selfsimilar_profile(1.1, ff, kLaw, s),
                                   CorrectionPair::dirichlet(0.0, s), Boundary::dirichlet),
               std::invalid_argument);
  EXPECT_THROW(perturbation_fields(st, grid, constant_wave(ff, kLaw, s), CorrectionPair::dirichlet(0.0, s),
                                   Boundary::neumann),
               std::invalid_argument);
}

TEST(DecayReport, JsonShape) {
  DecayReport r;
  r.lambda = 0.3;
  r.branch = "dirichlet_subcritical";
  r.functionals.push_back({"omega_1", false, 1.3, {2.0, 0.05, true}});
  auto j = r.to_json();
  EXPECT_EQ(j["branch"], "dirichlet_subcritical");
  EXPECT_TRUE(j["all_pass"].get<bool>());
  r.functionals.push_back({"omega_2", false, 2.6, {2.0, 0.3, false}});
  EXPECT_FALSE(r.all_pass());
}
