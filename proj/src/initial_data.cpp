#include "diffwave/initial_data.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "diffwave/errors.hpp"

namespace diffwave {

namespace {
// Every family member equals its far-field value beyond this point.
constexpr double kSupportEnd = 10.0;
}  // namespace

double unit_bump(double x, double a, double b) {
  const double y = (2.0 * x - a - b) / (b - a);
  const double s = 1.0 - y * y;
  return s > 0.0 ? std::exp(1.0 - 1.0 / s) : 0.0;
}

InitialData::InitialData(const InitialDataSpec& spec) : spec_(spec) {
  if (!(spec.far_field.v_plus > 0.0)) throw DomainError("v_plus must be > 0");
  if (spec.boundary == Boundary::neumann && !(spec.v0_at_0 > 0.0)) {
    throw DomainError("v0(0) must be > 0");
  }
}

double InitialData::v0(double x) const {
  const auto& s = spec_;
  double v = s.far_field.v_plus + s.amplitude * unit_bump(x, 2.0, 10.0);
  if (s.boundary == Boundary::neumann) v += (s.v0_at_0 - s.far_field.v_plus) * m0_.tail(x);
  return v;
}

double InitialData::u0(double x) const {
  const auto& s = spec_;
  const double up = s.far_field.u_plus;
  const double bump = s.amplitude * unit_bump(x, 3.0, 9.0);
  if (s.boundary == Boundary::dirichlet) return up * m0_.antiderivative(x) + bump;
  return up + (s.u0_at_0 - up) * m0_.tail(x) + bump;
}

InitialProfile InitialData::v_profile() const {
  InitialProfile p;
  p.v0 = [self = *this](double x) { return self.v0(x); };
  const double start = spec_.boundary == Boundary::neumann ? 0.0 : 2.0;
  p.support = {{start, kSupportEnd}};
  return p;
}

State InitialData::cell_averages(const Grid1D& grid) const {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  State st;
  st.v.resize(grid.cells);
  st.u.resize(grid.cells);
  const double vp = spec_.far_field.v_plus;
  const double up = spec_.far_field.u_plus;
  for (std::size_t i = 0; i < grid.cells; ++i) {
    const double a = grid.face(i), b = grid.face(i + 1);
    if (a >= kSupportEnd) {
      st.v[i] = vp;
      st.u[i] = up;
      continue;
    }
    double err = 0.0;
    st.v[i] = Quad::integrate([&](double x) { return v0(x); }, a, b, 12, 1e-14, &err) / (b - a);
    st.u[i] = Quad::integrate([&](double x) { return u0(x); }, a, b, 12, 1e-14, &err) / (b - a);
    if (!(st.v[i] > 0.0)) {
      throw PositivityError("initial data not positive; reduce the amplitude", static_cast<long>(i), 0.0);
    }
  }
  return st;
}

}  // namespace diffwave
