#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "diffwave/correction.hpp"
#include "diffwave/errors.hpp"
#include "diffwave/simd/kernels.hpp"
#include "diffwave/waves.hpp"

namespace diffwave {

double initial_excess(const InitialProfile& profile, double v_plus) {
  if (!profile.v0) throw std::invalid_argument("initial profile has no v0");
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0;
  for (const auto& [a, b] : profile.support) {
    if (!(b > a) || a < 0.0) throw DomainError("initial profile support interval must be 0 <= a < b");
    double err = 0.0;
    total += Quad::integrate([&](double x) { return profile.v0(x) - v_plus; }, a, b, 15, 1e-14, &err);
  }
  return total;
}

DirichletInitData build_dirichlet_wave_initdata(const InitialProfile& v0_spec,
                                                const FarFieldState& far_field,
                                                const DampingSchedule& sched, const Grid1D& grid) {
  DirichletInitData out;
  MassBudget& mb = out.budget;
  mb.initial_excess = initial_excess(v0_spec, far_field.v_plus);
  mb.u_plus = far_field.u_plus;
  mb.B0 = far_field.u_plus == 0.0 ? 0.0 : sched.tail(0.0);
  mb.wave_excess = mb.initial_excess - mb.u_plus * mb.B0;
  mb.delta0 = 2.0 * mb.wave_excess;

  const Mollifier g;
  out.vbar0.assign(grid.cells, far_field.v_plus);
  double vmin = far_field.v_plus;
  for (std::size_t i = 0; i < grid.cells; ++i) {
    const double a = grid.face(i), b = grid.face(i + 1);
    if (b > Mollifier::kLower && a < Mollifier::kUpper) {
      out.vbar0[i] += mb.wave_excess * g.cell_average(a, b);
    }
    vmin = std::min(vmin, out.vbar0[i]);
  }
  if (!(vmin > 0.0)) {
    throw DomainError("amplitude too large: initial diffusion wave reaches v=" +
                      std::to_string(vmin) + " <= 0");
  }
  return out;
}

namespace {

class ParabolicStepper {
 public:
  ParabolicStepper(const PressureLaw& law, double alpha, double v_plus, double dx,
                   std::size_t cells, const ParabolicOptions& opt)
      : law_(law),
        scale_(1.0 / (alpha * dx * dx)),
        p_plus_(law(v_plus)),
        opt_(opt),
        p_(cells),
        dp_(cells),
        work_(cells),
        lower_(cells),
        diag_(cells),
        upper_(cells),
        rhs_(cells),
        stage_(cells),
        delta_(cells) {}

  // Advances v by ds with TR-BDF2.
  void step(std::vector<double>& v, double ds, double t_report) {
    constexpr double g = 2.0 - std::numbers::sqrt2;
    const std::size_t n = v.size();
    // Trapezoidal stage to s + g ds.
    pressures(v);
    operator_apply(work_);
    const double c1 = 0.5 * g * ds;
    for (std::size_t i = 0; i < n; ++i) rhs_[i] = v[i] + c1 * work_[i];
    stage_ = v;
    newton(stage_, c1, t_report);
    // BDF2 stage to s + ds.
    const double c2 = (1.0 - g) / (2.0 - g) * ds;
    const double a = 1.0 / (g * (2.0 - g));
    const double b = (1.0 - g) * (1.0 - g) / (g * (2.0 - g));
    for (std::size_t i = 0; i < n; ++i) rhs_[i] = a * stage_[i] - b * v[i];
    v = stage_;
    newton(v, c2, t_report);
  }

 private:
  void pressures(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (law_.is_gamma_law()) {
      simd::active().gamma_pressure(v.data(), n, law_.gamma(), p_.data(), dp_.data());
      for (std::size_t i = 0; i < n; ++i) dp_[i] = -dp_[i] * dp_[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        p_[i] = law_(v[i]);
        dp_[i] = law_.deriv(v[i], 1);
      }
    }
  }

  // out = F(v) = -(1/alpha) D2 p(v), zero gradient at x = 0 and p(v+) past the end.
  void operator_apply(std::vector<double>& out) const {
    const std::size_t n = p_.size();
    out[0] = -scale_ * (p_[1] - p_[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = -scale_ * (p_[i + 1] - 2.0 * p_[i] + p_[i - 1]);
    out[n - 1] = -scale_ * (p_plus_ - 2.0 * p_[n - 1] + p_[n - 2]);
  }

  // Solves v - c F(v) = rhs_ starting from the given v.
  void newton(std::vector<double>& v, double c, double t_report) {
    const std::size_t n = v.size();
    for (int it = 0; it < opt_.newton_max_iter; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!(v[i] > 0.0)) {
          throw PositivityError("parabolic wave solve lost positivity", static_cast<long>(i),
                                t_report);
        }
      }
      pressures(v);
      operator_apply(work_);
      const double cs = c * scale_;
      for (std::size_t i = 0; i < n; ++i) {
        delta_[i] = -(v[i] - c * work_[i] - rhs_[i]);
        const double own = (i == 0 ? 1.0 : 2.0) * dp_[i];
        diag_[i] = 1.0 - cs * own;
        lower_[i] = i > 0 ? cs * dp_[i - 1] : 0.0;
        upper_[i] = i + 1 < n ? cs * dp_[i + 1] : 0.0;
      }
      // Thomas algorithm; the matrix is a diagonally dominant M-matrix.
      for (std::size_t i = 1; i < n; ++i) {
        const double m = lower_[i] / diag_[i - 1];
        diag_[i] -= m * upper_[i - 1];
        delta_[i] -= m * delta_[i - 1];
      }
      delta_[n - 1] /= diag_[n - 1];
      for (std::size_t i = n - 1; i-- > 0;) delta_[i] = (delta_[i] - upper_[i] * delta_[i + 1]) / diag_[i];
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        v[i] += delta_[i];
        change = std::max(change, std::abs(delta_[i]));
      }
      if (change <= opt_.newton_tol) return;
    }
    throw NumericalError("parabolic wave Newton iteration did not converge in " +
                         std::to_string(opt_.newton_max_iter) + " iterations at t=" +
                         std::to_string(t_report));
  }

  const PressureLaw& law_;
  double scale_;
  double p_plus_;
  ParabolicOptions opt_;
  std::vector<double> p_, dp_, work_, lower_, diag_, upper_, rhs_, stage_, delta_;
};

}  // namespace

WaveProfile dirichlet_diffusion_wave(std::span<const double> vbar0, const FarFieldState& far_field,
                                     const PressureLaw& law, const DampingSchedule& sched,
                                     const Grid1D& grid, std::span<const double> sample_times,
                                     const ParabolicOptions& options) {
  if (sched.lambda() >= 1.0) {
    throw DomainError("the diffusion-wave construction requires lambda in [0, 1)");
  }
  if (vbar0.size() != grid.cells) throw std::invalid_argument("vbar0 does not match the wave grid");
  if (grid.dx() > 0.1) {
    throw DomainError("wave grid too coarse: need at least 20 cells across the bump on [1, 3]");
  }
  for (std::size_t i = 0; i < vbar0.size(); ++i) {
    if (!(vbar0[i] > 0.0)) throw PositivityError("initial wave not positive", static_cast<long>(i), 0.0);
  }

  std::vector<double> times{0.0};
  for (double t : sample_times) {
    if (!(t >= 0.0)) throw DomainError("sample times must be >= 0");
    times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const double lam = sched.lambda();
  WaveProfile::Stack stack;
  stack.grid = grid;
  stack.times = times;
  stack.values.reserve(times.size());

  std::vector<double> v(vbar0.begin(), vbar0.end());
  stack.values.push_back(v);

  // A uniform state is an exact fixed point; skip the solve entirely.
  const bool uniform = std::all_of(v.begin(), v.end(), [&](double x) { return x == far_field.v_plus; });

  ParabolicStepper stepper(law, sched.alpha(), far_field.v_plus, grid.dx(), grid.cells, options);
  double s = 0.0;
  double ds_nominal = options.initial_step;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double target = rescaled_time(times[k], lam);
    while (!uniform && s < target) {
      double ds = std::min(ds_nominal, options.step_fraction * (s + 1.0));
      ds_nominal = ds * options.step_growth;
      bool last = false;
      if (s + ds >= target * (1.0 - 1e-14)) {
        ds = target - s;
        last = true;
      }
      stepper.step(v, ds, times[k]);
      s = last ? target : s + ds;
    }
    stack.values.push_back(v);
  }
  return WaveProfile::from_stack(far_field, law, sched, std::move(stack));
}

}  // namespace diffwave
