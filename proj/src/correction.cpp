#include "diffwave/correction.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diffwave/errors.hpp"

namespace diffwave {

namespace {

constexpr int kTableIntervals = 1 << 14;

double raw_bump(double x) {
  const double y = x - 2.0;
  const double s = 1.0 - y * y;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

double raw_bump_derivative(double x) {
  const double y = x - 2.0;
  const double s = 1.0 - y * y;
  return s > 0.0 ? std::exp(-1.0 / s) * (-2.0 * y / (s * s)) : 0.0;
}

}  // namespace

struct Mollifier::Table {
  double h = 0.0;
  double inv_z = 0.0;
  std::vector<double> cumulative;  // normalised, size intervals + 1
};

Mollifier::Mollifier() {
  static const std::shared_ptr<const Table> shared = [] {
    auto table = std::make_shared<Table>();
    table->h = (kUpper - kLower) / kTableIntervals;
    std::vector<double> raw(kTableIntervals + 1, 0.0);
    using Gauss = boost::math::quadrature::gauss<double, 5>;
    for (int j = 0; j < kTableIntervals; ++j) {
      const double a = kLower + j * table->h;
      raw[j + 1] = raw[j] + Gauss::integrate(raw_bump, a, a + table->h);
    }
    const double z = raw.back();
    table->inv_z = 1.0 / z;
    table->cumulative.resize(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) table->cumulative[j] = raw[j] / z;
    table->cumulative.back() = 1.0;
    return table;
  }();
  table_ = shared;
}

double Mollifier::value(double x) const { return raw_bump(x) * table_->inv_z; }

double Mollifier::derivative(double x) const { return raw_bump_derivative(x) * table_->inv_z; }

double Mollifier::antiderivative(double x) const {
  if (x <= kLower) return 0.0;
  if (x >= kUpper) return 1.0;
  const double h = table_->h;
  const double pos = (x - kLower) / h;
  auto j = static_cast<int>(pos);
  if (j >= kTableIntervals) j = kTableIntervals - 1;
  const double s = pos - j;
  const double x0 = kLower + j * h;
  const double y0 = table_->cumulative[static_cast<std::size_t>(j)];
  const double y1 = table_->cumulative[static_cast<std::size_t>(j) + 1];
  const double d0 = value(x0) * h;
  const double d1 = value(x0 + h) * h;
  // Cubic Hermite basis on [0, 1].
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * d1;
}

double Mollifier::tail(double x) const { return 1.0 - antiderivative(x); }

double Mollifier::cell_average(double a, double b) const {
  if (!(b > a)) throw DomainError("mollifier cell average needs a < b");
  return (antiderivative(b) - antiderivative(a)) / (b - a);
}

double mollifier_eval(const Mollifier& m0, double x, MollifierField want) {
  if (x < 0.0) throw DomainError("mollifier is defined on the half-line x >= 0");
  switch (want) {
    case MollifierField::value:
      return m0.value(x);
    case MollifierField::antiderivative:
      return m0.antiderivative(x);
    case MollifierField::tail:
      return m0.tail(x);
  }
  return 0.0;
}

CorrectionPair::CorrectionPair(CorrectionRegime regime, double u_plus, double u0_at_0,
                               const DampingSchedule& sched)
    : regime_(regime), u_plus_(u_plus), u0_at_0_(u0_at_0), sched_(sched) {}

CorrectionPair CorrectionPair::dirichlet(double u_plus, const DampingSchedule& sched) {
  return CorrectionPair(CorrectionRegime::dirichlet, u_plus, 0.0, sched);
}

CorrectionPair CorrectionPair::neumann(double u_plus, double u0_at_0,
                                       const DampingSchedule& sched) {
  return CorrectionPair(CorrectionRegime::neumann, u_plus, u0_at_0, sched);
}

double CorrectionPair::amplitude() const noexcept {
  return regime_ == CorrectionRegime::dirichlet ? u_plus_ : -(u0_at_0_ - u_plus_);
}

double CorrectionPair::eval_with(double x, double beta, double beta_dot, double tail,
                                 CorrectionField want) const {
  const double amp = amplitude();
  switch (want) {
    case CorrectionField::v_hat:
      return amp * m0_.value(x) * tail;
    case CorrectionField::dt_v_hat:
    case CorrectionField::dx_u_hat:
      return amp * m0_.value(x) * beta;
    case CorrectionField::u_hat:
    case CorrectionField::dt_u_hat: {
      const double k = want == CorrectionField::u_hat ? beta : beta_dot;
      if (regime_ == CorrectionRegime::dirichlet) return u_plus_ * k * m0_.antiderivative(x);
      return (u_plus_ + (u0_at_0_ - u_plus_) * m0_.tail(x)) * k;
    }
  }
  return 0.0;
}

double CorrectionPair::eval(double x, double t, CorrectionField want) const {
  if (x < 0.0) throw DomainError("correction evaluated at x < 0");
  const double beta = sched_.beta(t);
  const double beta_dot = sched_.beta_derivative(t);
  // B(t) only feeds v_hat; skip the quadrature otherwise.
  const double tail = (want == CorrectionField::v_hat && amplitude() != 0.0) ? sched_.tail(t) : 0.0;
  return eval_with(x, beta, beta_dot, tail, want);
}

void CorrectionPair::sample(std::span<const double> xs, double t, CorrectionField want,
                            std::span<double> out) const {
  if (xs.size() != out.size()) throw std::invalid_argument("correction sample: size mismatch");
  const double beta = sched_.beta(t);
  const double beta_dot = sched_.beta_derivative(t);
  const double tail = (want == CorrectionField::v_hat && amplitude() != 0.0) ? sched_.tail(t) : 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval_with(xs[i], beta, beta_dot, tail, want);
}

void CorrectionPair::sample_v_cell_averages(std::span<const double> faces, double t,
                                            std::span<double> out) const {
  if (faces.size() != out.size() + 1) {
    throw std::invalid_argument("correction cell averages: need cells + 1 faces");
  }
  const double amp = amplitude();
  if (amp == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double coeff = amp * sched_.tail(t);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = faces[i];
    const double b = faces[i + 1];
    out[i] = (b <= Mollifier::kLower || a >= Mollifier::kUpper) ? 0.0
                                                                  : coeff * m0_.cell_average(a, b);
  }
}

double correction_eval(const CorrectionPair& pair, double x, double t, CorrectionField want) {
  return pair.eval(x, t, want);
}

}  // namespace diffwave
