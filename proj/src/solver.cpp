#include "diffwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diffwave/errors.hpp"

namespace diffwave {

const char* to_string(Boundary b) noexcept {
  return b == Boundary::dirichlet ? "dirichlet" : "neumann";
}
const char* to_string(FluxKind f) noexcept { return f == FluxKind::llf ? "llf" : "hll"; }
const char* to_string(Reconstruction r) noexcept {
  return r == Reconstruction::first_order ? "first_order" : "muscl_minmod";
}

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be >= 0");
  if (!(far_field.v_plus > 0.0)) throw ConfigError("v_plus must be > 0");
  if (boundary == Boundary::neumann && !(v0_at_0 > 0.0)) throw ConfigError("v0_at_0 must be > 0");
  double prev = -1.0;
  for (double t : sample_times) {
    if (!(t >= 0.0 && t <= t_end)) throw ConfigError("sample times must lie in [0, t_end]");
    if (!(t > prev)) throw ConfigError("sample times must be strictly increasing");
    prev = t;
  }
}

namespace {

GhostCells ghosts_for(const std::vector<double>& v, const std::vector<double>& u,
                      const SolverConfig& config, double t) {
  const std::size_t n = v.size();
  GhostCells g{};
  for (int k = 0; k < 2; ++k) {
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(k), n - 1);
    if (config.boundary == Boundary::dirichlet) {
      g.v_left[k] = v[i];
      g.u_left[k] = -u[i];
    } else {
      g.v_left[k] = 2.0 * config.v0_at_0 - v[i];
      g.u_left[k] = u[i];
    }
    g.v_right[k] = config.far_field.v_plus;
    g.u_right[k] = config.far_field.u_plus * config.sched.beta(t);
  }
  return g;
}

}  // namespace

GhostCells apply_boundary(const State& state, const SolverConfig& config, double t) {
  if (state.v.empty() || state.v.size() != state.u.size()) {
    throw std::invalid_argument("state arrays must be non-empty and of equal length");
  }
  return ghosts_for(state.v, state.u, config, t);
}

double exact_damping_integral(const DampingSchedule& sched, double t0, double t1) {
  return sched.integral(t0, t1);
}

NumericalFlux hyperbolic_flux(double vl, double ul, double vr, double ur, const PressureLaw& law,
                              FluxKind kind) {
  if (!(vl > 0.0) || !(vr > 0.0)) throw DomainError("Riemann flux with vacuum state");
  const double pl = law(vl), pr = law(vr);
  const double cl = law.sound_speed(vl), cr = law.sound_speed(vr);
  NumericalFlux f{};
  const auto& k = simd::detail::scalar_table;
  (kind == FluxKind::llf ? k.llf_flux : k.hll_flux)(&vl, &ul, &pl, &cl, &vr, &ur, &pr, &cr, 1,
                                                    &f.v, &f.u);
  return f;
}

Solver::Solver(SolverConfig config, Grid1D grid)
    : config_(std::move(config)),
      grid_(grid),
      kernels_(config_.backend ? &simd::table(*config_.backend) : &simd::active()) {
  const std::size_t n = grid_.cells;
  ve_.resize(n + 4);
  ue_.resize(n + 4);
  for (auto* a : {&vl_, &vr_, &ul_, &ur_, &pl_, &pr_, &cl_, &cr_, &fv_, &fu_}) a->resize(n + 1);
  v0_.resize(n);
  u0_.resize(n);
  pc_.resize(n + 4);
  cc_.resize(n + 4);
}

void Solver::fill_extended(const std::vector<double>& q, const double* ghost_left,
                           const double* ghost_right, std::vector<double>& ext) const {
  const std::size_t n = q.size();
  ext[1] = ghost_left[0];
  ext[0] = ghost_left[1];
  std::copy(q.begin(), q.end(), ext.begin() + 2);
  ext[n + 2] = ghost_right[0];
  ext[n + 3] = ghost_right[1];
}

double Solver::stable_dt(const State& state) {
  const GhostCells g = ghosts_for(state.v, state.u, config_, state.t);
  fill_extended(state.v, g.v_left, g.v_right, ve_);
  const std::size_t m = ve_.size();
  double cmax = 0.0;
  if (config_.law.is_gamma_law()) {
    kernels_->gamma_pressure(ve_.data(), m, config_.law.gamma(), pc_.data(), cc_.data());
    for (std::size_t i = 0; i < m; ++i) cmax = std::max(cmax, cc_[i]);
  } else {
    for (double v : ve_) cmax = std::max(cmax, config_.law.sound_speed(v));
  }
  return config_.cfl * grid_.dx() / cmax;
}

// Face fluxes for the current (v, u) held in ve_/ue_.
void Solver::hyperbolic_rhs_flux(const State& state, double t_ghost) {
  const std::size_t n = grid_.cells;
  const GhostCells g = ghosts_for(state.v, state.u, config_, t_ghost);
  fill_extended(state.v, g.v_left, g.v_right, ve_);
  fill_extended(state.u, g.u_left, g.u_right, ue_);
  const std::size_t faces = n + 1;
  if (config_.reconstruction == Reconstruction::muscl_minmod) {
    kernels_->minmod_faces(ve_.data(), faces, vl_.data(), vr_.data());
    kernels_->minmod_faces(ue_.data(), faces, ul_.data(), ur_.data());
  } else {
    std::copy(ve_.begin() + 1, ve_.begin() + 1 + faces, vl_.begin());
    std::copy(ve_.begin() + 2, ve_.begin() + 2 + faces, vr_.begin());
    std::copy(ue_.begin() + 1, ue_.begin() + 1 + faces, ul_.begin());
    std::copy(ue_.begin() + 2, ue_.begin() + 2 + faces, ur_.begin());
  }
  for (std::size_t f = 0; f < faces; ++f) {
    if (!(vl_[f] > 0.0) || !(vr_[f] > 0.0)) {
      throw PositivityError("reconstructed face state lost positivity", static_cast<long>(f),
                            state.t);
    }
  }
  if (config_.law.is_gamma_law()) {
    kernels_->gamma_pressure(vl_.data(), faces, config_.law.gamma(), pl_.data(), cl_.data());
    kernels_->gamma_pressure(vr_.data(), faces, config_.law.gamma(), pr_.data(), cr_.data());
  } else {
    for (std::size_t f = 0; f < faces; ++f) {
      pl_[f] = config_.law(vl_[f]);
      pr_[f] = config_.law(vr_[f]);
      cl_[f] = config_.law.sound_speed(vl_[f]);
      cr_[f] = config_.law.sound_speed(vr_[f]);
    }
  }
  auto flux = config_.flux == FluxKind::llf ? kernels_->llf_flux : kernels_->hll_flux;
  flux(vl_.data(), ul_.data(), pl_.data(), cl_.data(), vr_.data(), ur_.data(), pr_.data(),
       cr_.data(), faces, fv_.data(), fu_.data());
}

StepInfo Solver::step(State& state, double dt) {
  const std::size_t n = grid_.cells;
  if (state.v.size() != n || state.u.size() != n) {
    throw std::invalid_argument("state does not match the solver grid");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be > 0");
  const double t0 = state.t;
  const double t_mid = t0 + 0.5 * dt;
  const double t1 = t0 + dt;
  const double dtdx = dt / grid_.dx();

  StepInfo info;
  info.dt = dt;
  info.t = t1;

  // Half-step of exact damping.
  kernels_->scale(state.u.data(), n, std::exp(-config_.sched.integral(t0, t_mid)));

  double cmax = 0.0;
  auto stage = [&](double weight) {
    hyperbolic_rhs_flux(state, t_mid);
    for (std::size_t f = 0; f <= n; ++f) cmax = std::max({cmax, cl_[f], cr_[f]});
    info.boundary_mass_flux += weight * dt * (fv_[0] - fv_[n]);
    kernels_->conservative_update(state.v.data(), fv_.data(), n, dtdx);
    kernels_->conservative_update(state.u.data(), fu_.data(), n, dtdx);
  };

  if (config_.reconstruction == Reconstruction::muscl_minmod) {
    // SSP-RK2 (Heun): q1 = q + dt L(q); q = (q + q1 + dt L(q1)) / 2.
    v0_ = state.v;
    u0_ = state.u;
    stage(0.5);
    stage(0.5);
    kernels_->blend(state.v.data(), v0_.data(), n, 0.5);
    kernels_->blend(state.u.data(), u0_.data(), n, 0.5);
  } else {
    stage(1.0);
  }

  const double vmin = kernels_->min(state.v.data(), n);
  if (!(vmin > 0.0)) {
    const auto it = std::find_if(state.v.begin(), state.v.end(), [](double v) { return !(v > 0.0); });
    throw PositivityError("specific volume reached v <= 0 (vacuum)",
                          static_cast<long>(it - state.v.begin()), t1);
  }

  kernels_->scale(state.u.data(), n, std::exp(-config_.sched.integral(t_mid, t1)));
  state.t = t1;
  info.min_v = vmin;
  info.courant = cmax * dtdx;
  return info;
}

Trajectory run(State initial, const SolverConfig& config, const Grid1D& grid,
               const SampleObserver& observer, bool keep_snapshots) {
  config.validate();
  if (initial.v.size() != grid.cells || initial.u.size() != grid.cells) {
    throw std::invalid_argument("initial state does not match the grid");
  }
  for (std::size_t i = 0; i < grid.cells; ++i) {
    if (!(initial.v[i] > 0.0)) {
      throw PositivityError("initial specific volume must be > 0", static_cast<long>(i), 0.0);
    }
  }
  Solver solver(config, grid);
  Trajectory traj;
  State state = std::move(initial);
  traj.min_v = *std::min_element(state.v.begin(), state.v.end());

  auto emit = [&](std::size_t k) {
    if (observer) observer(state, k);
    if (keep_snapshots) traj.snapshots.push_back(state);
  };

  std::size_t next = 0;
  const auto& samples = config.sample_times;
  while (next < samples.size() && samples[next] <= state.t) emit(next++);
  while (state.t < config.t_end) {
    double dt = solver.stable_dt(state);
    const double target = next < samples.size() ? samples[next] : config.t_end;
    bool land = false;
    if (state.t + dt >= target) {
      dt = target - state.t;
      land = true;
    }
    StepInfo info = solver.step(state, dt);
    if (land) state.t = target;  // remove round-off so samples sit exactly on their times
    info.t = state.t;
    traj.min_v = std::min(traj.min_v, info.min_v);
    traj.steps.push_back(info);
    while (next < samples.size() && samples[next] <= state.t) emit(next++);
  }
  return traj;
}

io::Table snapshot_table(const State& state, const Grid1D& grid,
                         std::vector<std::pair<std::string, std::string>> params) {
  io::Table t;
  t.magic = "diffwave-snapshot v1";
  t.params.emplace_back("t", io::format_double(state.t));
  t.params.emplace_back("length", io::format_double(grid.length));
  t.params.emplace_back("cells", std::to_string(grid.cells));
  for (auto& p : params) t.params.push_back(std::move(p));
  t.params.emplace_back("columns", "x v u");
  t.columns = {grid.centers(), state.v, state.u};
  return t;
}

void write_snapshot(const std::filesystem::path& path, const State& state, const Grid1D& grid,
                    std::vector<std::pair<std::string, std::string>> params) {
  io::write_table(path, snapshot_table(state, grid, std::move(params)));
}

}  // namespace diffwave
