#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "diffwave/correction.hpp"

using namespace diffwave;
using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;

namespace {

// Independent closed form of the bump before normalisation.
double raw_bump(double x) {
  const double y = x - 2.0;
  return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0;
}

double bump_mass() { return Quad::integrate(raw_bump, 1.0, 3.0, 10, 1e-14); }

}  // namespace

TEST(Mollifier, EndpointsAndSymmetry) {
  const Mollifier m;
  EXPECT_EQ(m.value(0.0), 0.0);
  EXPECT_EQ(m.antiderivative(0.0), 0.0);
  EXPECT_EQ(m.tail(0.0), 1.0);
  EXPECT_EQ(m.value(10.0), 0.0);
  EXPECT_EQ(m.antiderivative(10.0), 1.0);
  EXPECT_EQ(m.tail(10.0), 0.0);
  EXPECT_NEAR(m.antiderivative(2.0), 0.5, 1e-12);
  EXPECT_EQ(mollifier_eval(m, 2.5, MollifierField::value), m.value(2.5));
  EXPECT_EQ(mollifier_eval(m, 2.5, MollifierField::tail), m.tail(2.5));
}

TEST(Mollifier, ValueAndAntiderivativeAgainstQuadrature) {
  const Mollifier m;
  const double z = bump_mass();
  for (int i = 0; i <= 200; ++i) {
    const double x = 0.5 + 3.0 * i / 200.0;
    EXPECT_NEAR(m.value(x), raw_bump(x) / z, 1e-13);
    const double hi = std::clamp(x, 1.0, 3.0);
    const double ref = hi > 1.0 ? Quad::integrate(raw_bump, 1.0, hi, 10, 1e-14) / z : 0.0;
    EXPECT_NEAR(m.antiderivative(x), ref, 1e-10) << "x=" << x;
    EXPECT_NEAR(m.tail(x), 1.0 - m.antiderivative(x), 1e-15);
  }
  // derivative against central differences
  const double h = 1e-5;
  for (double x : {1.3, 1.8, 2.0, 2.6}) {
    EXPECT_NEAR(m.derivative(x), (m.value(x + h) - m.value(x - h)) / (2 * h), 1e-6);
  }
}

TEST(Mollifier, CellAverages) {
  const Mollifier m;
  EXPECT_NEAR(m.cell_average(0.0, 4.0), 0.25, 1e-12);
  EXPECT_NEAR(m.cell_average(1.5, 2.5) * 1.0, m.antiderivative(2.5) - m.antiderivative(1.5), 1e-12);
}

TEST(CorrectionPair, ZeroAmplitudeVanishes) {
  const auto c = CorrectionPair::dirichlet(0.0, DampingSchedule(1.0, 0.3));
  for (auto f : {CorrectionField::v_hat, CorrectionField::u_hat, CorrectionField::dt_v_hat,
                 CorrectionField::dx_u_hat, CorrectionField::dt_u_hat}) {
    EXPECT_EQ(c.eval(2.0, 1.0, f), 0.0);
  }
}

TEST(CorrectionPair, NeumannBoundaryValue) {
  const auto c = CorrectionPair::neumann(0.01, 0.02, DampingSchedule(1.0, 0.0));
  EXPECT_DOUBLE_EQ(c.eval(0.0, 0.0, CorrectionField::u_hat), 0.02);
  EXPECT_DOUBLE_EQ(correction_eval(c, 0.0, 0.0, CorrectionField::u_hat), 0.02);
}

TEST(CorrectionPair, IdentitiesOnGrid) {
  for (double lambda : {0.0, 0.5, 0.9}) {
    const DampingSchedule s(1.0, lambda);
    for (const auto& pair : {CorrectionPair::dirichlet(0.01, s), CorrectionPair::neumann(0.01, 0.03, s)}) {
      for (int it = 0; it < 100; ++it) {
        const double t = std::expm1(std::log1p(100.0) * it / 99.0);
        for (int ix = 0; ix < 200; ++ix) {
          const double x = 4.0 * ix / 199.0;
          EXPECT_LE(std::abs(pair.eval(x, t, CorrectionField::dt_v_hat) -
                             pair.eval(x, t, CorrectionField::dx_u_hat)),
                    1e-12);
          const double u = pair.eval(x, t, CorrectionField::u_hat);
          EXPECT_LE(std::abs(pair.eval(x, t, CorrectionField::dt_u_hat) + s.coefficient(t) * u),
                    1e-12 * std::abs(u));
        }
      }
    }
  }
}

TEST(CorrectionPair, BoundaryExactness) {
  const DampingSchedule s(1.0, 0.4);
  const auto d = CorrectionPair::dirichlet(0.02, s);
  const auto n = CorrectionPair::neumann(0.02, -0.01, s);
  for (double t : {0.0, 1.0, 10.0}) {
    EXPECT_EQ(d.eval(0.0, t, CorrectionField::u_hat), 0.0);
    EXPECT_EQ(n.eval(0.0, t, CorrectionField::v_hat), 0.0);
    EXPECT_EQ(n.eval(0.0, t, CorrectionField::dx_u_hat), 0.0);
    // far end
    EXPECT_NEAR(d.eval(5.0, t, CorrectionField::u_hat), 0.02 * s.beta(t), 1e-15);
    EXPECT_NEAR(n.eval(5.0, t, CorrectionField::u_hat), 0.02 * s.beta(t), 1e-15);
  }
}

TEST(CorrectionPair, MassEqualsAmplitudeTimesTail) {
  const DampingSchedule s(1.0, 0.5);
  const auto pair = CorrectionPair::neumann(0.01, 0.03, s);
  EXPECT_DOUBLE_EQ(pair.amplitude(), -0.02);
  for (double t : {0.0, 2.0, 20.0}) {
    const double l1 = Quad::integrate(
        [&](double x) { return std::abs(pair.eval(x, t, CorrectionField::v_hat)); }, 1.0, 3.0, 10, 1e-14);
    EXPECT_NEAR(l1, std::abs(pair.amplitude() * s.tail(t)), 1e-12);
  }
  std::vector<double> faces{0.0, 1.5, 2.0, 4.0}, means(3);
  pair.sample_v_cell_averages(faces, 3.0, means);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) total += means[i] * (faces[i + 1] - faces[i]);
  EXPECT_NEAR(total, pair.amplitude() * s.tail(3.0), 1e-13);
}

TEST(CorrectionPair, SampleMatchesEval) {
  const auto pair = CorrectionPair::dirichlet(0.01, DampingSchedule(2.0, 0.3));
  std::vector<double> xs, out(50);
  for (int i = 0; i < 50; ++i) xs.push_back(0.08 * i);
  pair.sample(xs, 1.5, CorrectionField::u_hat, out);
  for (int i = 0; i < 50; ++i) EXPECT_DOUBLE_EQ(out[i], pair.eval(xs[i], 1.5, CorrectionField::u_hat));
}

TEST(CorrectionPair, SuperPolynomialDecay) {
  // (1+t)^p sup|vhat| has a single maximum and then falls to zero: at alpha = 1,
  // lambda = 1/2 it peaks near sqrt(1+t) = p + 1/2.
  for (double lambda : {0.0, 0.5}) {
    const DampingSchedule s(1.0, lambda);
    const auto pair = CorrectionPair::dirichlet(0.01, s);
    for (double p : {1.0, 2.0, 4.0}) {
      std::vector<double> w;
      for (int i = 0; i <= 80; ++i) {
        const double t = 10.0 * std::pow(100.0, i / 80.0);
        w.push_back(std::pow(1.0 + t, p) * std::abs(pair.eval(2.0, t, CorrectionField::v_hat)));
      }
      const auto peak = std::max_element(w.begin(), w.end());
      for (auto it = peak; it + 1 != w.end(); ++it) EXPECT_LE(*(it + 1), *it);
      EXPECT_LT(w.back(), 1e-12 * *peak);
    }
  }
}
