#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "diffwave/errors.hpp"
#include "diffwave/waves.hpp"
#include "hermite.hpp"

namespace diffwave {

namespace {

void require_query(double x, double t) {
  if (!(x >= 0.0)) throw DomainError("wave evaluated at x < 0");
  if (!(t >= 0.0)) throw DomainError("wave evaluated at t < 0");
}

// Stack cell value or d/ds rate with the boundary ghosts of the parabolic solve:
// even mirror at x = 0, v+ beyond the last cell.
struct StackView {
  const WaveProfile::Stack& stack;
  const PressureLaw& law;
  double alpha;
  double v_plus;

  double value(std::size_t k, long j) const {
    const auto& v = stack.values[k];
    const long n = static_cast<long>(v.size());
    if (j < 0) j = -j - 1;
    if (j >= n) return v_plus;
    return v[static_cast<std::size_t>(j)];
  }

  double rate(std::size_t k, long j) const {
    const double h = stack.grid.dx();
    const double pl = law(value(k, j - 1));
    const double pc = law(value(k, j));
    const double pr = law(value(k, j + 1));
    return -(pr - 2.0 * pc + pl) / (alpha * h * h);
  }

  template <class Cell>
  double interp(double x, bool slope, Cell&& cell) const {
    const double h = stack.grid.dx();
    const double pos = x / h - 0.5;
    const long j = static_cast<long>(std::floor(pos));
    const double s = pos - static_cast<double>(j);
    const double ym = cell(j - 1), y0 = cell(j), y1 = cell(j + 1), y2 = cell(j + 2);
    const double d0 = 0.5 * (y1 - ym);
    const double d1 = 0.5 * (y2 - y0);
    if (slope) return detail::hermite_slope(s, y0, d0, y1, d1) / h;
    return detail::hermite(s, y0, d0, y1, d1);
  }
};

}  // namespace

const char* to_string(WaveRegime regime) noexcept {
  switch (regime) {
    case WaveRegime::gaussian_linear:
      return "gaussian_linear";
    case WaveRegime::dirichlet_parabolic:
      return "dirichlet_parabolic";
    case WaveRegime::neumann_selfsimilar:
      return "neumann_selfsimilar";
    case WaveRegime::constant:
      return "constant";
  }
  return "unknown";
}

double rescaled_time(double t, double lambda) {
  if (!(t >= 0.0)) throw DomainError("rescaled time needs t >= 0");
  const double e = lambda + 1.0;
  return std::expm1(e * std::log1p(t)) / e;
}

WaveProfile::WaveProfile(WaveRegime regime, const FarFieldState& far_field, const PressureLaw& law,
                         const DampingSchedule& sched)
    : regime_(regime), far_field_(far_field), law_(law), sched_(sched), payload_(Constant{}) {}

WaveProfile WaveProfile::constant(const FarFieldState& far_field, const PressureLaw& law,
                                  const DampingSchedule& sched) {
  return WaveProfile(WaveRegime::constant, far_field, law, sched);
}

WaveProfile WaveProfile::gaussian(const FarFieldState& far_field, const PressureLaw& law,
                                  const DampingSchedule& sched, double delta0) {
  WaveProfile w(WaveRegime::gaussian_linear, far_field, law, sched);
  w.payload_ = Gaussian{delta0};
  return w;
}

WaveProfile WaveProfile::from_stack(const FarFieldState& far_field, const PressureLaw& law,
                                    const DampingSchedule& sched, Stack stack) {
  if (stack.times.empty() || stack.times.size() != stack.values.size()) {
    throw std::invalid_argument("wave stack: times and snapshots disagree");
  }
  for (const auto& v : stack.values) {
    if (v.size() != stack.grid.cells) throw std::invalid_argument("wave stack: wrong snapshot size");
  }
  stack.rescaled.resize(stack.times.size());
  for (std::size_t k = 0; k < stack.times.size(); ++k) {
    stack.rescaled[k] = rescaled_time(stack.times[k], sched.lambda());
    if (k > 0 && !(stack.times[k] > stack.times[k - 1])) {
      throw std::invalid_argument("wave stack: times must increase");
    }
  }
  WaveProfile w(WaveRegime::dirichlet_parabolic, far_field, law, sched);
  w.payload_ = std::make_shared<const Stack>(std::move(stack));
  return w;
}

WaveProfile WaveProfile::from_table(const FarFieldState& far_field, const PressureLaw& law,
                                    const DampingSchedule& sched, SelfSimilar table) {
  if (table.phi.size() < 2 || table.phi.size() != table.dphi.size() || !(table.xi_max > 0.0)) {
    throw std::invalid_argument("self-similar table is malformed");
  }
  WaveProfile w(WaveRegime::neumann_selfsimilar, far_field, law, sched);
  w.payload_ = std::make_shared<const SelfSimilar>(std::move(table));
  return w;
}

const WaveProfile::Gaussian* WaveProfile::gaussian_payload() const noexcept {
  return std::get_if<Gaussian>(&payload_);
}

const WaveProfile::Stack* WaveProfile::stack_payload() const noexcept {
  auto p = std::get_if<std::shared_ptr<const Stack>>(&payload_);
  return p ? p->get() : nullptr;
}

const WaveProfile::SelfSimilar* WaveProfile::selfsimilar_payload() const noexcept {
  auto p = std::get_if<std::shared_ptr<const SelfSimilar>>(&payload_);
  return p ? p->get() : nullptr;
}

double WaveProfile::darcy_factor(double t) const {
  return std::exp(sched_.lambda() * std::log1p(t)) / sched_.alpha();
}

double WaveProfile::eval_gaussian(double x, double t, WaveField want) const {
  const double lam = sched_.lambda();
  const double kappa = far_field_.kappa;
  // Heat kernel with diffusivity kappa at rescaled time sigma = (1+t)^(lambda+1)/(lambda+1).
  const double sigma = std::exp((lam + 1.0) * std::log1p(t)) / (lam + 1.0);
  const double g = gaussian_payload()->delta0 / std::sqrt(4.0 * std::numbers::pi * kappa * sigma) *
                   std::exp(-x * x / (4.0 * kappa * sigma));
  const double gx = -x / (2.0 * kappa * sigma) * g;
  switch (want) {
    case WaveField::v:
      return far_field_.v_plus + g;
    case WaveField::dx_v:
      return gx;
    case WaveField::u:
      return kappa * std::exp(lam * std::log1p(t)) * gx;
    case WaveField::dt_v: {
      const double gxx = (x * x / (4.0 * kappa * kappa * sigma * sigma) - 0.5 / (kappa * sigma)) * g;
      return std::exp(lam * std::log1p(t)) * kappa * gxx;
    }
  }
  return 0.0;
}

namespace {

struct SelfSimilarPoint {
  double phi;
  double dphi;  // d phi / d xi
};

SelfSimilarPoint selfsimilar_at(const WaveProfile::SelfSimilar& tab, double v_plus, double xi) {
  if (xi >= tab.xi_max) return {v_plus, 0.0};
  const std::size_t n = tab.phi.size() - 1;
  const double h = tab.xi_max / static_cast<double>(n);
  const double pos = xi / h;
  auto j = static_cast<std::size_t>(pos);
  if (j >= n) j = n - 1;
  const double s = pos - static_cast<double>(j);
  const double y0 = tab.phi[j], y1 = tab.phi[j + 1];
  const double d0 = tab.dphi[j] * h, d1 = tab.dphi[j + 1] * h;
  return {detail::hermite(s, y0, d0, y1, d1), detail::hermite_slope(s, y0, d0, y1, d1) / h};
}

}  // namespace

double WaveProfile::eval_selfsimilar(double x, double t, WaveField want) const {
  const double lam = sched_.lambda();
  const double stretch = std::exp(0.5 * (lam + 1.0) * std::log1p(t));
  const double xi = x / stretch;
  const auto pt = selfsimilar_at(*selfsimilar_payload(), far_field_.v_plus, xi);
  switch (want) {
    case WaveField::v:
      return pt.phi;
    case WaveField::dx_v:
      return pt.dphi / stretch;
    case WaveField::u:
      return -darcy_factor(t) * law_.deriv(pt.phi, 1) * pt.dphi / stretch;
    case WaveField::dt_v:
      return -0.5 * (lam + 1.0) * xi * pt.dphi / (1.0 + t);
  }
  return 0.0;
}

void WaveProfile::sample_stack(std::span<const double> xs, double t, WaveField want,
                               std::span<double> out) const {
  const Stack& st = *stack_payload();
  const double s = rescaled_time(t, sched_.lambda());
  const double slack = 1e-12 * (1.0 + std::abs(st.rescaled.back()));
  if (s < st.rescaled.front() - slack || s > st.rescaled.back() + slack) {
    throw DomainError("wave queried at t=" + std::to_string(t) +
                      " outside the parabolic snapshot range [" + std::to_string(st.times.front()) +
                      ", " + std::to_string(st.times.back()) + "]");
  }
  std::size_t k = 0;
  double w = 0.0;
  if (st.times.size() > 1) {
    auto it = std::upper_bound(st.rescaled.begin(), st.rescaled.end(), s);
    k = it == st.rescaled.begin() ? 0 : static_cast<std::size_t>(it - st.rescaled.begin()) - 1;
    if (k >= st.times.size() - 1) k = st.times.size() - 2;
    w = std::clamp((s - st.rescaled[k]) / (st.rescaled[k + 1] - st.rescaled[k]), 0.0, 1.0);
  }
  const StackView view{st, law_, sched_.alpha(), far_field_.v_plus};
  const bool two = w > 0.0;
  const double length = st.grid.length;
  const double darcy = darcy_factor(t);
  const double ds_dt = std::exp(sched_.lambda() * std::log1p(t));

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (!(x >= 0.0)) throw DomainError("wave evaluated at x < 0");
    auto field = [&](std::size_t kk, bool slope, bool rate) {
      if (rate) return view.interp(x, slope, [&](long j) { return view.rate(kk, j); });
      return view.interp(x, slope, [&](long j) { return view.value(kk, j); });
    };
    auto mix = [&](bool slope, bool rate) {
      const double a = field(k, slope, rate);
      return two ? (1.0 - w) * a + w * field(k + 1, slope, rate) : a;
    };
    if (x >= length + st.grid.dx()) {
      out[i] = want == WaveField::v ? far_field_.v_plus : 0.0;
      continue;
    }
    switch (want) {
      case WaveField::v:
        out[i] = mix(false, false);
        break;
      case WaveField::dx_v:
        out[i] = mix(true, false);
        break;
      case WaveField::u:
        out[i] = -darcy * law_.deriv(mix(false, false), 1) * mix(true, false);
        break;
      case WaveField::dt_v:
        out[i] = ds_dt * mix(false, true);
        break;
    }
  }
}

double WaveProfile::eval(double x, double t, WaveField want) const {
  require_query(x, t);
  switch (regime_) {
    case WaveRegime::constant:
      return want == WaveField::v ? far_field_.v_plus : 0.0;
    case WaveRegime::gaussian_linear:
      return eval_gaussian(x, t, want);
    case WaveRegime::neumann_selfsimilar:
      return eval_selfsimilar(x, t, want);
    case WaveRegime::dirichlet_parabolic: {
      double out = 0.0;
      sample_stack(std::span<const double>(&x, 1), t, want, std::span<double>(&out, 1));
      return out;
    }
  }
  return 0.0;
}

void WaveProfile::sample(std::span<const double> xs, double t, WaveField want,
                         std::span<double> out) const {
  if (xs.size() != out.size()) throw std::invalid_argument("wave sample: size mismatch");
  if (!(t >= 0.0)) throw DomainError("wave evaluated at t < 0");
  if (regime_ == WaveRegime::dirichlet_parabolic) {
    sample_stack(xs, t, want, out);
    return;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval(xs[i], t, want);
}

void WaveProfile::sample_cell_averages(std::span<const double> faces, double t,
                                       std::span<double> out) const {
  if (faces.size() != out.size() + 1) {
    throw std::invalid_argument("wave cell averages: need cells + 1 faces");
  }
  if (!(t >= 0.0)) throw DomainError("wave evaluated at t < 0");
  const double vp = far_field_.v_plus;
  const double lam = sched_.lambda();
  switch (regime_) {
    case WaveRegime::constant:
      std::fill(out.begin(), out.end(), vp);
      return;
    case WaveRegime::gaussian_linear: {
      const double sigma = std::exp((lam + 1.0) * std::log1p(t)) / (lam + 1.0);
      const double width = std::sqrt(4.0 * far_field_.kappa * sigma);
      const double half_mass = 0.5 * gaussian_payload()->delta0;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = faces[i], b = faces[i + 1];
        out[i] = vp + half_mass * (std::erf(b / width) - std::erf(a / width)) / (b - a);
      }
      return;
    }
    case WaveRegime::neumann_selfsimilar: {
      const SelfSimilar& tab = *selfsimilar_payload();
      const std::size_t n = tab.phi.size() - 1;
      const double h = tab.xi_max / static_cast<double>(n);
      // Cumulative int_0^xi (phi - v+) of the Hermite interpolant, exact per interval.
      std::vector<double> cum(n + 1, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        cum[j + 1] = cum[j] + h * detail::hermite_integral(1.0, tab.phi[j] - vp, tab.dphi[j] * h,
                                                            tab.phi[j + 1] - vp, tab.dphi[j + 1] * h);
      }
      auto excess = [&](double xi) {
        if (xi >= tab.xi_max) return cum[n];
        const double pos = xi / h;
        auto j = static_cast<std::size_t>(pos);
        if (j >= n) j = n - 1;
        const double s = pos - static_cast<double>(j);
        return cum[j] + h * detail::hermite_integral(s, tab.phi[j] - vp, tab.dphi[j] * h,
                                                     tab.phi[j + 1] - vp, tab.dphi[j + 1] * h);
      };
      const double stretch = std::exp(0.5 * (lam + 1.0) * std::log1p(t));
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = faces[i], b = faces[i + 1];
        out[i] = vp + stretch * (excess(b / stretch) - excess(a / stretch)) / (b - a);
      }
      return;
    }
    case WaveRegime::dirichlet_parabolic: {
      // Snapshots are cell means of a piecewise-constant field; integrate that exactly.
      const Stack& st = *stack_payload();
      const double s = rescaled_time(t, lam);
      std::size_t k = 0;
      double w = 0.0;
      const double slack = 1e-12 * (1.0 + std::abs(st.rescaled.back()));
      if (s < st.rescaled.front() - slack || s > st.rescaled.back() + slack) {
        throw DomainError("wave queried at t=" + std::to_string(t) +
                          " outside the parabolic snapshot range");
      }
      if (st.times.size() > 1) {
        auto it = std::upper_bound(st.rescaled.begin(), st.rescaled.end(), s);
        k = it == st.rescaled.begin() ? 0 : static_cast<std::size_t>(it - st.rescaled.begin()) - 1;
        if (k >= st.times.size() - 1) k = st.times.size() - 2;
        w = std::clamp((s - st.rescaled[k]) / (st.rescaled[k + 1] - st.rescaled[k]), 0.0, 1.0);
      }
      const std::size_t m = st.grid.cells;
      const double h = st.grid.dx();
      std::vector<double> prefix(m + 1, 0.0);
      for (std::size_t j = 0; j < m; ++j) {
        double val = st.values[k][j] - vp;
        if (w > 0.0) val = (1.0 - w) * val + w * (st.values[k + 1][j] - vp);
        prefix[j + 1] = prefix[j] + val;
      }
      auto excess = [&](double x) {
        if (x >= st.grid.length) return prefix[m] * h;
        const double pos = x / h;
        auto j = static_cast<std::size_t>(pos);
        if (j >= m) j = m - 1;
        const double frac = pos - static_cast<double>(j);
        return (prefix[j] + frac * (prefix[j + 1] - prefix[j])) * h;
      };
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = faces[i], b = faces[i + 1];
        out[i] = vp + (excess(b) - excess(a)) / (b - a);
      }
      return;
    }
  }
}

double wave_eval(const WaveProfile& profile, double x, double t, WaveField want) {
  return profile.eval(x, t, want);
}

WaveProfile gaussian_linear_wave(const FarFieldState& far_field, double delta0,
                                 const PressureLaw& law, const DampingSchedule& sched) {
  if (sched.lambda() >= 1.0) {
    throw DomainError("the diffusion-wave construction requires lambda in [0, 1)");
  }
  if (!(far_field.kappa > 0.0)) throw DomainError("kappa must be > 0");
  return WaveProfile::gaussian(far_field, law, sched, delta0);
}

WaveProfile constant_wave(const FarFieldState& far_field, const PressureLaw& law,
                          const DampingSchedule& sched) {
  return WaveProfile::constant(far_field, law, sched);
}

}  // namespace diffwave
