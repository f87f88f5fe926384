#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "diffwave/grid.hpp"
#include "diffwave/model.hpp"
#include "diffwave/simd/kernels.hpp"
#include "diffwave/table_io.hpp"

namespace diffwave {

enum class Boundary { dirichlet, neumann };
enum class FluxKind { llf, hll };
enum class Reconstruction { first_order, muscl_minmod };

const char* to_string(Boundary b) noexcept;
const char* to_string(FluxKind f) noexcept;
const char* to_string(Reconstruction r) noexcept;

/// Cell means of (v, u) at time t.
struct State {
  std::vector<double> v;
  std::vector<double> u;
  double t = 0.0;
};

struct SolverConfig {
  PressureLaw law = PressureLaw::gamma_law(1.4);
  DampingSchedule sched{1.0, 0.0};
  FarFieldState far_field{};
  Boundary boundary = Boundary::dirichlet;
  /// Pinned boundary volume v(0,t) = v0(0) under the Neumann condition.
  double v0_at_0 = 1.0;
  double cfl = 0.5;
  double t_end = 0.0;
  std::vector<double> sample_times;
  FluxKind flux = FluxKind::llf;
  Reconstruction reconstruction = Reconstruction::muscl_minmod;
  /// Kernel backend; empty means the runtime-selected one.
  std::optional<simd::Backend> backend;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

/// Two ghost cells at each end; index 0 is adjacent to the domain.
struct GhostCells {
  double v_left[2];
  double u_left[2];
  double v_right[2];
  double u_right[2];
};

GhostCells apply_boundary(const State& state, const SolverConfig& config, double t);

/// int_{t0}^{t1} alpha/(1+s)^lambda ds in closed form.
double exact_damping_integral(const DampingSchedule& sched, double t0, double t1);

struct NumericalFlux {
  double v;
  double u;
};

/// Approximate Riemann flux for the p-system flux (-u, p(v)).
NumericalFlux hyperbolic_flux(double vl, double ul, double vr, double ur, const PressureLaw& law,
                              FluxKind kind);

struct StepInfo {
  double t = 0.0;        // time at the end of the step
  double dt = 0.0;
  double min_v = 0.0;
  double courant = 0.0;  // max signal speed * dt / dx
  /// dt-weighted (F_v(0) - F_v(L)) over the hyperbolic stages: the exact change of sum(v) dx.
  double boundary_mass_flux = 0.0;
};

/// Finite-volume solver for the damped p-system on [0, L].
///
/// One step is Strang-split: exact damping of u over dt/2, a hyperbolic update
/// (forward Euler or SSP-RK2 with MUSCL-minmod faces), exact damping over dt/2.
class Solver {
 public:
  Solver(SolverConfig config, Grid1D grid);

  const SolverConfig& config() const noexcept { return config_; }
  const Grid1D& grid() const noexcept { return grid_; }

  /// cfl * dx / max sound speed over cells and ghosts.
  double stable_dt(const State& state);
  StepInfo step(State& state, double dt);

 private:
  void hyperbolic_rhs_flux(const State& state, double t_ghost);
  void fill_extended(const std::vector<double>& q, const double* ghost_left,
                     const double* ghost_right, std::vector<double>& ext) const;

  SolverConfig config_;
  Grid1D grid_;
  const simd::KernelTable* kernels_;
  std::vector<double> ve_, ue_;                 // extended with ghosts, size N + 4
  std::vector<double> vl_, vr_, ul_, ur_;       // face states, size N + 1
  std::vector<double> pl_, pr_, cl_, cr_;
  std::vector<double> fv_, fu_;
  std::vector<double> v0_, u0_;                 // RK stage copies
  std::vector<double> pc_, cc_;                 // cell pressures / speeds
};

struct Trajectory {
  std::vector<State> snapshots;  // one per sample time, when kept
  std::vector<StepInfo> steps;
  double min_v = 0.0;
};

/// Called at every sample time (dt is clipped to land on them exactly).
using SampleObserver = std::function<void(const State&, std::size_t sample_index)>;

Trajectory run(State initial, const SolverConfig& config, const Grid1D& grid,
               const SampleObserver& observer = {}, bool keep_snapshots = true);

/// "# diffwave-snapshot v1" with columns x v u.
io::Table snapshot_table(const State& state, const Grid1D& grid,
                         std::vector<std::pair<std::string, std::string>> params = {});
void write_snapshot(const std::filesystem::path& path, const State& state, const Grid1D& grid,
                    std::vector<std::pair<std::string, std::string>> params = {});

}  // namespace diffwave
