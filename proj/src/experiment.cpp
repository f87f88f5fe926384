#include "diffwave/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "diffwave/correction.hpp"
#include "diffwave/errors.hpp"
#include "diffwave/initial_data.hpp"
#include "diffwave/table_io.hpp"
#include "diffwave/waves.hpp"

namespace diffwave {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

double number_at(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("config key '" + key + "' must be finite");
  return x;
}

std::size_t count_at(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

bool bool_at(const json& j, const std::string& key) {
  if (!j.at(key).is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
  return j.at(key).get<bool>();
}

std::string string_at(const json& j, const std::string& key) {
  if (!j.at(key).is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double x) { return io::format_double(x); }

}  // namespace

DecayRegime ExperimentConfig::decay_regime() const {
  if (boundary == Boundary::dirichlet) return DecayRegime::dirichlet;
  if (!v0_at_0 || *v0_at_0 == v_plus) return DecayRegime::neumann_constant;
  return DecayRegime::neumann;
}

double ExperimentConfig::resolved_length() const {
  if (length) return *length;
  // Causal horizon of the fastest characteristic plus ten diffusion widths.
  const auto law = PressureLaw::gamma_law(gamma);
  double v_min = v_plus;
  if (boundary == Boundary::neumann && v0_at_0) v_min = std::min(v_min, *v0_at_0);
  v_min -= std::abs(amplitude);
  if (!(v_min > 0.0)) throw ConfigError("amplitude too large: initial data would reach vacuum");
  const double kappa = -law.deriv(v_plus, 1) / alpha;
  const double width = std::sqrt(kappa * std::exp((lambda + 1.0) * std::log1p(t_end)) / (lambda + 1.0));
  return law.sound_speed(v_min) * t_end * 1.05 + 10.0 * width;
}

std::vector<double> ExperimentConfig::sample_times() const {
  std::vector<double> ts(samples);
  if (samples == 1) return {t_end};
  for (std::size_t k = 0; k < samples; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(samples - 1);
    ts[k] = log_spaced ? std::expm1(f * std::log1p(t_end)) : f * t_end;
  }
  ts.front() = 0.0;
  ts.back() = t_end;
  return ts;
}

void ExperimentConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("config key 'alpha' must be > 0");
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw ConfigError("config key 'lambda'=" + fmt(lambda) +
                      " is outside the theorem range [0,1) covered by the decay estimates");
  }
  if (!(gamma > 0.0)) throw ConfigError("config key 'gamma' must be > 0");
  if (!(v_plus > 0.0)) throw ConfigError("config key 'v_plus' must be > 0");
  if (v0_at_0 && !(*v0_at_0 > 0.0)) throw ConfigError("config key 'v0_at_0' must be > 0");
  if (boundary == Boundary::dirichlet && (v0_at_0 || u0_at_0)) {
    throw ConfigError("config keys 'v0_at_0'/'u0_at_0' only apply to the neumann boundary");
  }
  if (length && !(*length > 0.0)) throw ConfigError("config key 'L' must be > 0");
  if (cells < 16) throw ConfigError("config key 'N' must be >= 16");
  if (!(t_end > 0.0)) throw ConfigError("config key 't_end' must be > 0");
  if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("config key 'cfl' must lie in (0, 1)");
  if (samples < 2) throw ConfigError("config key 'samples' must be >= 2");
  if (!(fit_lo >= 0.0 && fit_lo < fit_hi && fit_hi <= 1.0)) {
    throw ConfigError("config key 'fit_window' must satisfy 0 <= lo < hi <= 1");
  }
  if (!(epsilon > 0.0)) throw ConfigError("config key 'epsilon' must be > 0");
  if (!(v_tolerance > 0.0) || !(u_tolerance > 0.0)) throw ConfigError("exponent tolerances must be > 0");
  if (output_dir.empty()) throw ConfigError("config key 'output_dir' must not be empty");
  (void)resolved_length();
}

json ExperimentConfig::to_json() const {
  json j;
  j["alpha"] = alpha;
  j["lambda"] = lambda;
  j["gamma"] = gamma;
  j["v_plus"] = v_plus;
  j["u_plus"] = u_plus;
  j["boundary"] = to_string(boundary);
  j["v0_at_0"] = v0_at_0 ? json(*v0_at_0) : json(nullptr);
  j["u0_at_0"] = u0_at_0 ? json(*u0_at_0) : json(nullptr);
  j["regime"] = to_string(decay_regime());
  j["amplitude"] = amplitude;
  j["L"] = resolved_length();
  j["L_auto"] = !length.has_value();
  j["N"] = cells;
  j["t_end"] = t_end;
  j["cfl"] = cfl;
  j["samples"] = samples;
  j["log_spaced"] = log_spaced;
  j["fit_window"] = {fit_lo, fit_hi};
  j["v_tolerance"] = v_tolerance;
  j["u_tolerance"] = u_tolerance;
  j["epsilon"] = epsilon;
  j["b"] = b ? json(*b) : json(nullptr);
  j["flux"] = to_string(flux);
  j["reconstruction"] = to_string(reconstruction);
  j["output_dir"] = output_dir;
  j["snapshots"] = snapshots;
  return j;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return hex64(h);
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{
      "alpha", "lambda", "gamma", "v_plus", "u_plus", "boundary", "v0_at_0", "u0_at_0",
      "regime", "amplitude", "L", "L_auto", "N", "t_end", "cfl", "samples", "log_spaced",
      "fit_window", "v_tolerance", "u_tolerance", "epsilon", "b", "flux", "reconstruction",
      "output_dir", "snapshots"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  for (const char* key : {"alpha", "lambda", "boundary"}) {
    if (!j.contains(key)) throw ConfigError(std::string("missing required config key '") + key + "'");
  }
  ExperimentConfig c;
  c.alpha = number_at(j, "alpha");
  c.lambda = number_at(j, "lambda");
  const std::string boundary = string_at(j, "boundary");
  if (boundary == "dirichlet") {
    c.boundary = Boundary::dirichlet;
  } else if (boundary == "neumann") {
    c.boundary = Boundary::neumann;
  } else {
    throw ConfigError("config key 'boundary' must be \"dirichlet\" or \"neumann\"");
  }
  auto opt_number = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return number_at(j, key);
  };
  if (j.contains("gamma")) c.gamma = number_at(j, "gamma");
  if (j.contains("v_plus")) c.v_plus = number_at(j, "v_plus");
  if (j.contains("u_plus")) c.u_plus = number_at(j, "u_plus");
  c.v0_at_0 = opt_number("v0_at_0");
  c.u0_at_0 = opt_number("u0_at_0");
  if (j.contains("amplitude")) c.amplitude = number_at(j, "amplitude");
  const bool auto_length = j.contains("L_auto") && bool_at(j, "L_auto");
  if (j.contains("L") && !auto_length) {
    if (j.at("L").is_string()) {
      if (j.at("L").get<std::string>() != "auto") throw ConfigError("config key 'L' must be a number or \"auto\"");
    } else {
      c.length = number_at(j, "L");
    }
  }
  if (j.contains("N")) c.cells = count_at(j, "N");
  if (j.contains("t_end")) c.t_end = number_at(j, "t_end");
  if (j.contains("cfl")) c.cfl = number_at(j, "cfl");
  if (j.contains("samples")) c.samples = count_at(j, "samples");
  if (j.contains("log_spaced")) c.log_spaced = bool_at(j, "log_spaced");
  if (j.contains("fit_window")) {
    const json& w = j.at("fit_window");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
      throw ConfigError("config key 'fit_window' must be [lo_fraction, hi_fraction]");
    }
    c.fit_lo = w[0].get<double>();
    c.fit_hi = w[1].get<double>();
  }
  if (j.contains("v_tolerance")) c.v_tolerance = number_at(j, "v_tolerance");
  if (j.contains("u_tolerance")) c.u_tolerance = number_at(j, "u_tolerance");
  if (j.contains("epsilon")) c.epsilon = number_at(j, "epsilon");
  c.b = opt_number("b");
  if (j.contains("flux")) {
    const auto f = string_at(j, "flux");
    if (f == "llf") {
      c.flux = FluxKind::llf;
    } else if (f == "hll") {
      c.flux = FluxKind::hll;
    } else {
      throw ConfigError("config key 'flux' must be \"llf\" or \"hll\"");
    }
  }
  if (j.contains("reconstruction")) {
    const auto r = string_at(j, "reconstruction");
    if (r == "first_order") {
      c.reconstruction = Reconstruction::first_order;
    } else if (r == "muscl_minmod") {
      c.reconstruction = Reconstruction::muscl_minmod;
    } else {
      throw ConfigError("config key 'reconstruction' must be \"first_order\" or \"muscl_minmod\"");
    }
  }
  if (j.contains("output_dir")) c.output_dir = string_at(j, "output_dir");
  if (j.contains("snapshots")) c.snapshots = bool_at(j, "snapshots");
  if (j.contains("regime") && string_at(j, "regime") != to_string(c.decay_regime())) {
    throw ConfigError("config key 'regime' disagrees with boundary/v0_at_0");
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

fs::path output_root() {
  const char* env = std::getenv("DIFFWAVE_OUT");
  return env && *env ? fs::path(env) : fs::current_path();
}

std::string series_csv(const std::vector<SeriesRow>& rows) {
  std::string s =
      "t,v_wave_Linf_err,u_wave_Linf_err,omega_L2,omega_x_L2,omega_xx_L2,omega_xxx_L2,z_L2,"
      "z_x_L2,z_xx_L2,mass_drift,min_v\n";
  for (const auto& r : rows) {
    for (double x : {r.t, r.v_wave_Linf_err, r.u_wave_Linf_err, r.omega_L2, r.omega_x_L2,
                     r.omega_xx_L2, r.omega_xxx_L2, r.z_L2, r.z_x_L2, r.z_xx_L2, r.mass_drift}) {
      s += fmt(x);
      s += ',';
    }
    s += fmt(r.min_v);
    s += '\n';
  }
  return s;
}

namespace {

struct Pipeline {
  PressureLaw law;
  DampingSchedule sched;
  FarFieldState far_field;
  Grid1D grid;
  std::vector<double> times;
  std::optional<WaveProfile> wave;
  std::optional<CorrectionPair> corr;
  InitialDataSpec data_spec;
};

Pipeline prepare(const ExperimentConfig& c) {
  c.validate();
  Pipeline p{PressureLaw::gamma_law(c.gamma), DampingSchedule(c.alpha, c.lambda), {}, {}, {}, {}, {}, {}};
  p.far_field = FarFieldState::make(p.law, p.sched, c.v_plus, c.u_plus);
  p.grid = Grid1D::make(c.resolved_length(), c.cells);
  p.times = c.sample_times();
  p.data_spec.boundary = c.boundary;
  p.data_spec.far_field = p.far_field;
  p.data_spec.amplitude = c.amplitude;
  p.data_spec.v0_at_0 = c.v0_at_0.value_or(c.v_plus);
  p.data_spec.u0_at_0 = c.u0_at_0.value_or(c.u_plus);
  if (c.boundary == Boundary::dirichlet) {
    p.corr = CorrectionPair::dirichlet(c.u_plus, p.sched);
  } else {
    p.corr = CorrectionPair::neumann(c.u_plus, p.data_spec.u0_at_0, p.sched);
  }
  return p;
}

// Odd refinement so every solver cell centre is also a wave cell centre.
Grid1D wave_grid(const Grid1D& grid) {
  auto m = static_cast<std::size_t>(std::ceil(grid.dx() / 0.1 - 1e-12));
  if (m < 1) m = 1;
  if (m % 2 == 0) ++m;
  return Grid1D::make(grid.length, grid.cells * m);
}

WaveProfile make_wave(const ExperimentConfig& c, const Pipeline& p) {
  switch (c.decay_regime()) {
    case DecayRegime::neumann_constant:
      return constant_wave(p.far_field, p.law, p.sched);
    case DecayRegime::neumann:
      return neumann_selfsimilar_profile(*c.v0_at_0, p.far_field, p.law, p.sched);
    case DecayRegime::dirichlet: {
      const Grid1D fine = wave_grid(p.grid);
      const InitialData data(p.data_spec);
      const auto init = build_dirichlet_wave_initdata(data.v_profile(), p.far_field, p.sched, fine);
      return dirichlet_diffusion_wave(init.vbar0, p.far_field, p.law, p.sched, fine, p.times);
    }
  }
  throw std::logic_error("unreachable regime");
}

std::string plots_gp(const ExperimentConfig& c, const ExperimentResult& r) {
  std::ostringstream g;
  g << "# log-log decay curves; dashed lines have the predicted slopes\n"
    << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set logscale xy\n"
    << "set xlabel '1+t'\n"
    << "set format y '%.0e'\n"
    << "set terminal pngcairo size 1100,750\n"
    << "set output 'decay.png'\n";
  const auto& last = r.series.back();
  auto guide = [&](const std::string& name, double value, const std::optional<double>& p) {
    if (!p || !(value > 0.0)) return std::string();
    g << name << "(x) = " << fmt(value * std::pow(1.0 + last.t, *p)) << " * x**(-" << fmt(*p)
      << ")\n";
    return name;
  };
  const auto regime = c.decay_regime();
  const RateOptions ro{c.epsilon, c.b};
  const auto pv = predicted_rate(regime, Quantity::v_Linf, 0, c.lambda, ro).exponent;
  const auto pu = predicted_rate(regime, Quantity::u_Linf, 0, c.lambda, ro).exponent;
  const auto pw = predicted_rate(regime, Quantity::omega_k_L2, 1, c.lambda, ro).exponent;
  const std::string gv = guide("gv", last.v_wave_Linf_err, pv);
  const std::string gu = guide("gu", last.u_wave_Linf_err, pu);
  const std::string gw = guide("gw", last.omega_x_L2, pw);
  g << "plot 'series.csv' using (1+$1):2 with linespoints title '|v-vbar|_inf', \\\n"
    << "     'series.csv' using (1+$1):3 with linespoints title '|u-ubar|_inf', \\\n"
    << "     'series.csv' using (1+$1):5 with linespoints title '|omega_x|_2', \\\n"
    << "     'series.csv' using (1+$1):8 with linespoints title '|z|_2'";
  for (const auto& [name, label] : {std::pair{gv, "v slope"}, {gu, "u slope"}, {gw, "omega_x slope"}}) {
    if (!name.empty()) g << ", \\\n     " << name << "(x) with lines dt 2 title 'predicted " << label << "'";
  }
  g << "\n";
  return g.str();
}

void write_outputs(const ExperimentConfig& c, const fs::path& dir, const ExperimentResult& r) {
  io::write_atomic(dir / "series.csv", series_csv(r.series));
  io::write_atomic(dir / "report.json", r.report.to_json().dump(2) + "\n");
  io::write_atomic(dir / "plots.gp", plots_gp(c, r));
  if (!fs::exists(dir / "series.csv")) throw std::runtime_error("plot script references a missing series.csv");
}

DecayReport build_report(const ExperimentConfig& c, const ExperimentResult& r) {
  DecayReport rep;
  rep.regime = c.decay_regime();
  rep.lambda = c.lambda;
  rep.config_hash = c.hash();
  const RateOptions ro{c.epsilon, c.b};
  const WeightTable table = theorem_weights(rep.regime, c.lambda, ro);
  rep.branch = table.branch;

  std::vector<double> t;
  for (const auto& row : r.series) t.push_back(row.t);
  const double lo = c.fit_lo * c.t_end, hi = c.fit_hi * c.t_end;

  auto add = [&](const std::string& name, double SeriesRow::*field, Quantity q, int k,
                 std::optional<double> tol) {
    ExponentEntry e;
    e.quantity = name;
    std::vector<double> y;
    for (const auto& row : r.series) y.push_back(row.*field);
    e.predicted = predicted_rate(rep.regime, q, k, c.lambda, ro).exponent;
    if (e.predicted) e.tolerance = tol;
    try {
      e.fit = fit_decay(t, y, lo, hi);
      if (e.predicted) {
        e.margin = e.fit.exponent - *e.predicted;
        if (e.tolerance) e.pass = std::abs(*e.margin) <= *e.tolerance;
      }
    } catch (const std::exception& ex) {
      e.fit.t_lo = lo;
      e.fit.t_hi = hi;
      e.error = ex.what();
    }
    rep.exponents.push_back(std::move(e));
  };
  add("v_Linf", &SeriesRow::v_wave_Linf_err, Quantity::v_Linf, 0, c.v_tolerance);
  add("u_Linf", &SeriesRow::u_wave_Linf_err, Quantity::u_Linf, 0, c.u_tolerance);
  add("omega_L2", &SeriesRow::omega_L2, Quantity::omega_k_L2, 0, std::nullopt);
  add("omega_x_L2", &SeriesRow::omega_x_L2, Quantity::omega_k_L2, 1, std::nullopt);
  add("omega_xx_L2", &SeriesRow::omega_xx_L2, Quantity::omega_k_L2, 2, std::nullopt);
  add("omega_xxx_L2", &SeriesRow::omega_xxx_L2, Quantity::omega_k_L2, 3, std::nullopt);
  add("z_L2", &SeriesRow::z_L2, Quantity::omegat_k_L2, 0, std::nullopt);
  add("z_x_L2", &SeriesRow::z_x_L2, Quantity::omegat_k_L2, 1, std::nullopt);
  add("z_xx_L2", &SeriesRow::z_xx_L2, Quantity::omegat_k_L2, 2, std::nullopt);

  for (const auto& f : weighted_energy_series(r.norms, table)) {
    FunctionalEntry e;
    e.name = f.name;
    e.integrated = f.integrated;
    e.claimed_exponent = f.claimed_exponent;
    e.check = boundedness_check(f.t, f.raw, f.claimed_exponent);
    rep.functionals.push_back(std::move(e));
  }
  return rep;
}

}  // namespace

WaveProfile build_wave(const ExperimentConfig& config) {
  const Pipeline p = prepare(config);
  return make_wave(config, p);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const fs::path& dir) {
  const Pipeline p = prepare(config);
  ExperimentResult res;
  res.config = config;
  res.directory = dir;
  fs::create_directories(dir);
  io::write_atomic(dir / "resolved_config.json", config.to_json().dump(2) + "\n");
  fs::remove(dir / "ABORTED");

  try {
    const WaveProfile wave = make_wave(config, p);
    const InitialData data(p.data_spec);
    State initial = data.cell_averages(p.grid);
    {
      double l1 = 0.0;
      for (double v : initial.v) l1 += std::abs(v - config.v_plus);
      res.initial_excess_L1 = l1 * p.grid.dx();
    }

    SolverConfig sc;
    sc.law = p.law;
    sc.sched = p.sched;
    sc.far_field = p.far_field;
    sc.boundary = config.boundary;
    sc.v0_at_0 = p.data_spec.v0_at_0;
    sc.cfl = config.cfl;
    sc.t_end = config.t_end;
    sc.sample_times = p.times;
    sc.flux = config.flux;
    sc.reconstruction = config.reconstruction;

    const auto faces = p.grid.faces();
    const auto centers = p.grid.centers();
    std::vector<double> vbar(p.grid.cells), ubar(p.grid.cells), diff(p.grid.cells);
    const double mass_scale = res.initial_excess_L1 > 0.0 ? res.initial_excess_L1 : 1.0;

    auto observe = [&](const State& s, std::size_t k) {
      const PerturbationFields pf = perturbation_fields(s, p.grid, wave, *p.corr, config.boundary);
      wave.sample_cell_averages(faces, s.t, vbar);
      wave.sample(centers, s.t, WaveField::u, ubar);
      SeriesRow row;
      row.t = s.t;
      const auto& kt = simd::active();
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s.v[i] - vbar[i];
      row.v_wave_Linf_err = kt.max_abs(diff.data(), diff.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s.u[i] - ubar[i];
      row.u_wave_Linf_err = kt.max_abs(diff.data(), diff.size());
      const NormRecord nr = norm_record(pf, p.grid);
      row.omega_L2 = std::sqrt(nr.omega_sq[0]);
      row.omega_x_L2 = std::sqrt(nr.omega_sq[1]);
      row.omega_xx_L2 = std::sqrt(nr.omega_sq[2]);
      row.omega_xxx_L2 = std::sqrt(nr.omega_sq[3]);
      row.z_L2 = std::sqrt(nr.z_sq[0]);
      row.z_x_L2 = std::sqrt(nr.z_sq[1]);
      row.z_xx_L2 = std::sqrt(nr.z_sq[2]);
      row.mass_drift = pf.mass / mass_scale;
      row.min_v = kt.min(s.v.data(), s.v.size());
      res.series.push_back(row);
      res.norms.push_back(nr);
      if (config.snapshots) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%03zu.txt", k);
        write_snapshot(dir / "snapshots" / name, s, p.grid, {{"config_hash", config.hash()}});
      }
    };

    const Trajectory traj = run(std::move(initial), sc, p.grid, observe, false);
    res.steps = traj.steps.size();
    for (const auto& st : traj.steps) res.max_courant = std::max(res.max_courant, st.courant);
    res.report = build_report(config, res);
    write_outputs(config, dir, res);
  } catch (const NumericalError& e) {
    io::write_atomic(dir / "series.csv", series_csv(res.series));
    io::write_atomic(dir / "ABORTED", std::string(e.what()) + "\n");
    throw;
  } catch (const DomainError& e) {
    io::write_atomic(dir / "series.csv", series_csv(res.series));
    io::write_atomic(dir / "ABORTED", std::string(e.what()) + "\n");
    throw;
  }
  return res;
}

std::string sweep_csv(const std::vector<SweepEntry>& entries) {
  std::string s =
      "lambda,v_fitted,v_predicted,v_margin,u_fitted,u_predicted,u_margin,v_r2,u_r2,status\n";
  auto cell = [](const std::optional<double>& x) { return x ? fmt(*x) : std::string(); };
  for (const auto& e : entries) {
    s += fmt(e.lambda);
    std::optional<double> vf, vp, vm, uf, up, um, vr, ur;
    if (e.result) {
      for (const auto& x : e.result->report.exponents) {
        const bool ok = x.error.empty();
        if (x.quantity == "v_Linf") {
          if (ok) vf = x.fit.exponent, vr = x.fit.r2;
          vp = x.predicted;
          vm = x.margin;
        } else if (x.quantity == "u_Linf") {
          if (ok) uf = x.fit.exponent, ur = x.fit.r2;
          up = x.predicted;
          um = x.margin;
        }
      }
    }
    for (const auto& x : {vf, vp, vm, uf, up, um, vr, ur}) s += "," + cell(x);
    std::string status = e.ok ? "ok" : "failed: " + e.error;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    s += "," + status + "\n";
  }
  return s;
}

std::vector<SweepEntry> sweep(const ExperimentConfig& base, std::vector<double> lambdas,
                              unsigned jobs, const fs::path& dir) {
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  for (double l : lambdas) {
    if (!(l >= 0.0 && l < 1.0)) {
      throw ConfigError("sweep lambda " + fmt(l) + " is outside the theorem range [0,1)");
    }
  }
  std::vector<SweepEntry> entries(lambdas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < lambdas.size(); i = next++) {
      SweepEntry& e = entries[i];
      e.lambda = lambdas[i];
      try {
        ExperimentConfig c = base;
        c.lambda = lambdas[i];
        c.validate();
        e.result = run_experiment(c, dir / ("lambda_" + fmt(lambdas[i])));
        e.ok = true;
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, lambdas.size()))));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  fs::create_directories(dir);
  io::write_atomic(dir / "sweep.csv", sweep_csv(entries));
  std::ostringstream g;
  g << "# fitted decay exponent of |v - vbar|_inf against lambda\n"
    << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set xlabel 'lambda'\n"
    << "set ylabel 'exponent'\n"
    << "set xrange [0:1]\n"
    << "set terminal pngcairo size 1000,700\n"
    << "set output 'sweep.png'\n";
  if (base.boundary == Boundary::dirichlet) {
    g << "pv(x) = x < 0.6 ? 0.75*(x+1) : (3-x)/2\n"
      << "pu(x) = x < 0.6 ? (x+5)/4 : 2-x\n"
      << "plot 'sweep.csv' using 1:2 with points pt 7 title 'fitted v', \\\n"
      << "     'sweep.csv' using 1:5 with points pt 5 title 'fitted u', \\\n"
      << "     pv(x) with lines title 'predicted v', pu(x) with lines title 'predicted u'\n";
  } else {
    g << "plot 'sweep.csv' using 1:2 with points pt 7 title 'fitted v', \\\n"
      << "     'sweep.csv' using 1:5 with points pt 5 title 'fitted u'\n";
  }
  io::write_atomic(dir / "sweep.gp", g.str());
  return entries;
}

}  // namespace diffwave
