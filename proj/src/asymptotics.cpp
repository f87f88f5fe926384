#include "diffwave/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diffwave/errors.hpp"

namespace diffwave {

namespace {

constexpr double kDirichletCut = 3.0 / 5.0;
constexpr double kNeumannCut = 1.0 / 7.0;

bool at(double lambda, double cut) { return std::abs(lambda - cut) < 1e-12; }

void require_theorem_range(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw DomainError("decay predictions need lambda in [0, 1), got " + std::to_string(lambda));
  }
}

// Centred first and second differences with ghost parity at 0 and zero past the end.
void differentiate(const std::vector<double>& f, bool even, double dx, std::vector<double>* d1,
                   std::vector<double>* d2) {
  const std::size_t n = f.size();
  auto at_index = [&](long i) {
    if (i < 0) return even ? f[static_cast<std::size_t>(-i - 1)] : -f[static_cast<std::size_t>(-i - 1)];
    if (i >= static_cast<long>(n)) return 0.0;
    return f[static_cast<std::size_t>(i)];
  };
  if (d1) d1->resize(n);
  if (d2) d2->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long j = static_cast<long>(i);
    const double l = at_index(j - 1), c = f[i], r = at_index(j + 1);
    if (d1) (*d1)[i] = (r - l) / (2.0 * dx);
    if (d2) (*d2)[i] = (r - 2.0 * c + l) / (dx * dx);
  }
}

struct LineFit {
  double slope = 0.0;
  double r2 = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit out;
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - (my + out.slope * (x[i] - mx));
      ss_res += e * e;
    }
    out.r2 = 1.0 - ss_res / syy;
  }
  return out;
}

}  // namespace

PerturbationFields perturbation_fields(const State& snapshot, const Grid1D& grid,
                                       const WaveProfile& wave, const CorrectionPair& corr,
                                       Boundary boundary) {
  const bool dirichlet = boundary == Boundary::dirichlet;
  const auto wr = wave.regime();
  const bool wave_ok = dirichlet ? (wr != WaveRegime::neumann_selfsimilar)
                                 : (wr == WaveRegime::neumann_selfsimilar || wr == WaveRegime::constant);
  const bool corr_ok = (corr.regime() == CorrectionRegime::dirichlet) == dirichlet;
  if (!wave_ok || !corr_ok) {
    throw std::invalid_argument(std::string("regime mismatch: ") + to_string(boundary) +
                                " state with " + to_string(wr) + " wave and " +
                                (corr.regime() == CorrectionRegime::dirichlet ? "dirichlet" : "neumann") +
                                " correction");
  }
  const std::size_t n = grid.cells;
  if (snapshot.v.size() != n || snapshot.u.size() != n) {
    throw std::invalid_argument("snapshot does not match the grid");
  }
  const double dx = grid.dx();
  const double t = snapshot.t;
  const auto faces = grid.faces();
  const auto centers = grid.centers();

  std::vector<double> vbar(n), vhat(n), ubar(n), uhat(n);
  wave.sample_cell_averages(faces, t, vbar);
  corr.sample_v_cell_averages(faces, t, vhat);
  wave.sample(centers, t, WaveField::u, ubar);
  corr.sample(centers, t, CorrectionField::u_hat, uhat);

  PerturbationFields pf;
  pf.t = t;
  pf.omega_x.resize(n);
  pf.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pf.omega_x[i] = snapshot.v[i] - vbar[i] - vhat[i];
    pf.z[i] = snapshot.u[i] - ubar[i] - uhat[i];
  }
  // Reverse cumulative integral anchored at zero on the right edge.
  std::vector<double> face_omega(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) face_omega[i] = face_omega[i + 1] - pf.omega_x[i] * dx;
  pf.omega.resize(n);
  for (std::size_t i = 0; i < n; ++i) pf.omega[i] = 0.5 * (face_omega[i] + face_omega[i + 1]);
  pf.mass = -face_omega[0];

  differentiate(pf.omega_x, dirichlet, dx, &pf.omega_xx, &pf.omega_xxx);
  differentiate(pf.z, !dirichlet, dx, &pf.z_x, &pf.z_xx);
  return pf;
}

double norm(std::span<const double> field, const Grid1D& grid, NormKind which) {
  if (field.size() != grid.cells) throw std::invalid_argument("norm: field does not match grid");
  const auto& k = simd::active();
  switch (which) {
    case NormKind::L1:
      return k.sum_abs(field.data(), field.size()) * grid.dx();
    case NormKind::L2:
      return std::sqrt(k.sum_sq(field.data(), field.size()) * grid.dx());
    case NormKind::Linf:
      return k.max_abs(field.data(), field.size());
  }
  return 0.0;
}

const char* to_string(DecayRegime r) noexcept {
  switch (r) {
    case DecayRegime::dirichlet:
      return "dirichlet";
    case DecayRegime::neumann:
      return "neumann";
    case DecayRegime::neumann_constant:
      return "neumann_constant";
  }
  return "unknown";
}

WeightTable theorem_weights(DecayRegime regime, double lambda, const RateOptions& options) {
  require_theorem_range(lambda);
  const double l1 = lambda + 1.0;
  WeightTable w;

  auto subcritical = [&](const char* name) {
    w.branch = name;
    for (int k = 0; k < 4; ++k) w.omega[k] = l1 * k;
    for (int k = 0; k < 3; ++k) w.omega_t[k] = l1 * k + 2.0;
    for (int j = 1; j <= 3; ++j) w.integrated.push_back({false, j, l1 * j - 1.0});
    for (int j = 0; j <= 2; ++j) w.integrated.push_back({true, j, l1 * j + 1.0});
  };
  auto critical = [&](const char* name, double rate) {
    w.branch = name;
    for (int k = 0; k < 4; ++k) w.omega[k] = rate * k;
    for (int k = 0; k < 3; ++k) w.omega_t[k] = rate * k + 2.0;
    for (int j = 1; j <= 3; ++j) w.integrated.push_back({false, j, rate * j - 1.0});
    for (int j = 0; j <= 2; ++j) w.integrated.push_back({true, j, rate * j + 1.0});
    w.pointwise_slack = options.epsilon;
    w.integral_growth = options.epsilon;
  };
  // Pointwise shift s, b in (b_lo, lambda), integral growth b + g.
  auto supercritical = [&](const char* name, double shift, double b_lo, double growth_offset) {
    w.branch = name;
    for (int k = 0; k < 4; ++k) w.omega[k] = l1 * k + shift;
    for (int k = 0; k < 3; ++k) w.omega_t[k] = l1 * k + shift + 2.0;
    const double b = options.b.value_or(0.5 * (b_lo + lambda));
    if (!(b > b_lo && b < lambda)) {
      throw DomainError("integrated weight b must lie in (" + std::to_string(b_lo) + ", " +
                        std::to_string(lambda) + ")");
    }
    w.b = b;
    for (int j = 0; j <= 3; ++j) w.integrated.push_back({false, j, l1 * (j - 1) + b});
    for (int j = 0; j <= 2; ++j) w.integrated.push_back({true, j, l1 * j + b - lambda + 1.0});
    w.integral_growth = b + growth_offset;
  };

  switch (regime) {
    case DecayRegime::dirichlet:
      if (at(lambda, kDirichletCut)) {
        critical("dirichlet_critical", 8.0 / 5.0);
      } else if (lambda < kDirichletCut) {
        subcritical("dirichlet_subcritical");
      } else {
        supercritical("dirichlet_supercritical", 1.5 - 2.5 * lambda, 1.5 - 1.5 * lambda,
                      1.5 * lambda - 1.5);
      }
      break;
    case DecayRegime::neumann:
      if (at(lambda, kNeumannCut)) {
        critical("neumann_critical", 8.0 / 7.0);
      } else if (lambda < kNeumannCut) {
        subcritical("neumann_subcritical");
      } else {
        supercritical("neumann_supercritical", 0.5 - 3.5 * lambda, 0.5 - 2.5 * lambda,
                      2.5 * lambda - 0.5);
      }
      break;
    case DecayRegime::neumann_constant:
      subcritical("neumann_constant_state");
      break;
  }
  return w;
}

RatePrediction predicted_rate(DecayRegime regime, Quantity quantity, int k, double lambda,
                              const RateOptions& options) {
  require_theorem_range(lambda);
  RatePrediction r;
  r.regime = regime;
  r.quantity = quantity;
  r.k = k;
  r.lambda = lambda;
  const WeightTable w = theorem_weights(regime, lambda, options);
  r.branch = w.branch;
  switch (quantity) {
    case Quantity::v_Linf:
    case Quantity::u_Linf: {
      if (regime != DecayRegime::dirichlet) return r;  // not stated for the Neumann problem
      const bool v = quantity == Quantity::v_Linf;
      if (at(lambda, kDirichletCut)) {
        r.exponent = (v ? 6.0 / 5.0 : 7.0 / 5.0) - options.epsilon;
        r.epsilon_slack = options.epsilon;
      } else if (lambda < kDirichletCut) {
        r.exponent = v ? 0.75 * (lambda + 1.0) : 0.25 * (lambda + 5.0);
      } else {
        r.exponent = v ? 0.5 * (3.0 - lambda) : 2.0 - lambda;
      }
      return r;
    }
    case Quantity::omega_k_L2:
      if (k < 0 || k > 3) throw std::invalid_argument("omega derivative order must be 0..3");
      r.exponent = 0.5 * (w.omega[static_cast<std::size_t>(k)] - w.pointwise_slack);
      r.epsilon_slack = w.pointwise_slack;
      return r;
    case Quantity::omegat_k_L2:
      if (k < 0 || k > 2) throw std::invalid_argument("omega_t derivative order must be 0..2");
      r.exponent = 0.5 * (w.omega_t[static_cast<std::size_t>(k)] - w.pointwise_slack);
      r.epsilon_slack = w.pointwise_slack;
      return r;
  }
  return r;
}

NormRecord norm_record(const PerturbationFields& f, const Grid1D& grid) {
  NormRecord r;
  r.t = f.t;
  auto sq = [&](const std::vector<double>& x) {
    const double n = norm(x, grid, NormKind::L2);
    return n * n;
  };
  r.omega_sq = {sq(f.omega), sq(f.omega_x), sq(f.omega_xx), sq(f.omega_xxx)};
  r.z_sq = {sq(f.z), sq(f.z_x), sq(f.z_xx)};
  return r;
}

std::vector<FunctionalSeries> weighted_energy_series(std::span<const NormRecord> records,
                                                     const WeightTable& table) {
  std::vector<FunctionalSeries> out;
  auto base = [&](std::string name, bool integrated, double claimed) {
    FunctionalSeries s;
    s.name = std::move(name);
    s.integrated = integrated;
    s.claimed_exponent = claimed;
    for (const auto& r : records) s.t.push_back(r.t);
    return s;
  };
  auto value = [](const NormRecord& r, bool omega_t, int k) {
    return omega_t ? r.z_sq[static_cast<std::size_t>(k)] : r.omega_sq[static_cast<std::size_t>(k)];
  };
  auto pointwise = [&](bool omega_t, int k, double weight) {
    const std::string name = std::string(omega_t ? "omega_t" : "omega") + "_" + std::to_string(k);
    FunctionalSeries s = base(name, false, weight - table.pointwise_slack);
    for (const auto& r : records) {
      s.raw.push_back(value(r, omega_t, k));
      s.weighted.push_back(std::pow(1.0 + r.t, s.claimed_exponent) * s.raw.back());
    }
    out.push_back(std::move(s));
  };
  for (int k = 0; k < 4; ++k) pointwise(false, k, table.omega[static_cast<std::size_t>(k)]);
  for (int k = 0; k < 3; ++k) pointwise(true, k, table.omega_t[static_cast<std::size_t>(k)]);

  for (const auto& term : table.integrated) {
    const std::string name = std::string("int_") + (term.omega_t ? "omega_t" : "omega") + "_" +
                             std::to_string(term.k);
    FunctionalSeries s = base(name, true, -table.integral_growth);
    double acc = 0.0;
    double prev_t = 0.0, prev_f = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      const double f = std::pow(1.0 + r.t, term.weight) * value(r, term.omega_t, term.k);
      if (i > 0) acc += 0.5 * (r.t - prev_t) * (f + prev_f);
      prev_t = r.t;
      prev_f = f;
      s.raw.push_back(acc);
      s.weighted.push_back(std::pow(1.0 + r.t, s.claimed_exponent) * acc);
    }
    out.push_back(std::move(s));
  }
  return out;
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> value, double t_lo,
                   double t_hi) {
  if (t.size() != value.size()) throw std::invalid_argument("fit_decay: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(value[i] > 0.0)) {
      throw DomainError("fit_decay: non-positive value " + std::to_string(value[i]) + " at t=" +
                        std::to_string(t[i]) + "; shrink the window");
    }
    x.push_back(std::log1p(t[i]));
    y.push_back(std::log(value[i]));
  }
  if (x.size() < 8) {
    throw std::invalid_argument("fit_decay: need at least 8 samples in [" + std::to_string(t_lo) +
                                ", " + std::to_string(t_hi) + "], got " + std::to_string(x.size()));
  }
  const LineFit lf = least_squares(x, y);
  DecayFit f;
  f.exponent = -lf.slope;
  f.r2 = lf.r2;
  f.count = x.size();
  f.t_lo = t_lo;
  f.t_hi = t_hi;
  return f;
}

Boundedness boundedness_check(std::span<const double> t, std::span<const double> value,
                              double claimed_exponent, double max_slope) {
  if (t.size() != value.size()) throw std::invalid_argument("boundedness_check: size mismatch");
  Boundedness b;
  if (t.empty()) {
    b.pass = true;
    return b;
  }
  const double log_end = std::log1p(*std::max_element(t.begin(), t.end()));
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (value[i] < 0.0) throw DomainError("boundedness_check: negative value");
    const double w = std::pow(1.0 + t[i], claimed_exponent) * value[i];
    b.supremum = std::max(b.supremum, w);
    const double lt = std::log1p(t[i]);
    if (lt >= log_end - std::log(10.0) && w > 0.0) {
      x.push_back(lt);
      y.push_back(std::log(w));
    }
  }
  b.final_decade_slope = x.size() >= 2 ? least_squares(x, y).slope : 0.0;
  b.pass = b.final_decade_slope <= max_slope;
  return b;
}

bool DecayReport::all_pass() const {
  for (const auto& e : exponents) {
    if (e.pass && !*e.pass) return false;
    if (!e.error.empty() && e.tolerance) return false;
  }
  for (const auto& f : functionals) {
    if (!f.check.pass) return false;
  }
  return true;
}

nlohmann::json DecayReport::to_json() const {
  using nlohmann::json;
  json j;
  j["regime"] = to_string(regime);
  j["lambda"] = lambda;
  j["branch"] = branch;
  j["config_hash"] = config_hash;
  j["exponents"] = json::array();
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  for (const auto& e : exponents) {
    j["exponents"].push_back({{"quantity", e.quantity},
                              {"fitted", e.fit.exponent},
                              {"r2", e.fit.r2},
                              {"count", e.fit.count},
                              {"window", {e.fit.t_lo, e.fit.t_hi}},
                              {"predicted", opt(e.predicted)},
                              {"margin", opt(e.margin)},
                              {"tolerance", opt(e.tolerance)},
                              {"pass", opt(e.pass)}});
    if (!e.error.empty()) j["exponents"].back()["error"] = e.error;
  }
  j["functionals"] = json::array();
  for (const auto& f : functionals) {
    j["functionals"].push_back({{"name", f.name},
                                {"integrated", f.integrated},
                                {"claimed_exponent", f.claimed_exponent},
                                {"supremum", f.check.supremum},
                                {"final_decade_slope", f.check.final_decade_slope},
                                {"pass", f.check.pass}});
  }
  j["all_pass"] = all_pass();
  return j;
}

}  // namespace diffwave
