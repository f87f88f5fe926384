#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "diffwave/grid.hpp"
#include "diffwave/model.hpp"
#include "diffwave/table_io.hpp"

namespace diffwave {

enum class WaveRegime { gaussian_linear, dirichlet_parabolic, neumann_selfsimilar, constant };
enum class WaveField { v, u, dx_v, dt_v };

const char* to_string(WaveRegime regime) noexcept;

/// Diffusion-wave target (vbar, ubar)(x, t) on the half-line.
///
/// ubar is never stored: it always comes from the Darcy relation
/// ubar = -((1+t)^lambda / alpha) d_x p(vbar). For the Gaussian regime the
/// linearised pressure p'(v+) (v - v+) is used, which is what makes the
/// closed form an exact solution.
class WaveProfile {
 public:
  struct Gaussian {
    double delta0 = 0.0;
  };
  /// Parabolic snapshots on a cell-centred grid; linear in rescaled time between them.
  struct Stack {
    Grid1D grid;
    std::vector<double> times;
    std::vector<double> rescaled;              // s(t_k)
    std::vector<std::vector<double>> values;   // vbar cell means per snapshot
  };
  /// phi(xi) on a uniform xi grid with exact slopes from the profile ODE.
  struct SelfSimilar {
    double v_boundary = 1.0;
    double xi_max = 0.0;
    std::vector<double> phi;
    std::vector<double> dphi;
    double initial_slope = 0.0;
  };
  struct Constant {};

  static WaveProfile constant(const FarFieldState& far_field, const PressureLaw& law,
                              const DampingSchedule& sched);
  static WaveProfile gaussian(const FarFieldState& far_field, const PressureLaw& law,
                              const DampingSchedule& sched, double delta0);
  static WaveProfile from_stack(const FarFieldState& far_field, const PressureLaw& law,
                                const DampingSchedule& sched, Stack stack);
  static WaveProfile from_table(const FarFieldState& far_field, const PressureLaw& law,
                                const DampingSchedule& sched, SelfSimilar table);

  WaveRegime regime() const noexcept { return regime_; }
  const FarFieldState& far_field() const noexcept { return far_field_; }
  const PressureLaw& law() const noexcept { return law_; }
  const DampingSchedule& schedule() const noexcept { return sched_; }

  const Gaussian* gaussian_payload() const noexcept;
  const Stack* stack_payload() const noexcept;
  const SelfSimilar* selfsimilar_payload() const noexcept;

  double eval(double x, double t, WaveField want) const;
  void sample(std::span<const double> xs, double t, WaveField want, std::span<double> out) const;
  /// Mean of vbar over each [faces[i], faces[i+1]]; mass-consistent with the representation.
  void sample_cell_averages(std::span<const double> faces, double t, std::span<double> out) const;

 private:
  WaveProfile(WaveRegime regime, const FarFieldState& far_field, const PressureLaw& law,
              const DampingSchedule& sched);

  double darcy_factor(double t) const;
  double eval_gaussian(double x, double t, WaveField want) const;
  double eval_selfsimilar(double x, double t, WaveField want) const;
  void sample_stack(std::span<const double> xs, double t, WaveField want,
                    std::span<double> out) const;

  WaveRegime regime_;
  FarFieldState far_field_;
  PressureLaw law_;
  DampingSchedule sched_;
  std::variant<Gaussian, std::shared_ptr<const Stack>, std::shared_ptr<const SelfSimilar>, Constant>
      payload_;
};

double wave_eval(const WaveProfile& profile, double x, double t, WaveField want);

/// Rescaled time s = ((1+t)^(lambda+1) - 1)/(lambda+1); d s / d t = (1+t)^lambda.
double rescaled_time(double t, double lambda);

/// Mass bookkeeping that fixes the Dirichlet wave:
///   int (vbar0 - v+) = initial_excess - u+ B(0),   delta0 = 2 int (vbar0 - v+).
struct MassBudget {
  double initial_excess = 0.0;
  double u_plus = 0.0;
  double B0 = 0.0;
  double wave_excess = 0.0;
  double delta0 = 0.0;
};

/// v0 as a function plus the finite intervals outside which v0 == v+.
struct InitialProfile {
  std::function<double(double)> v0;
  std::vector<std::pair<double, double>> support;
};

/// int_0^inf (v0 - v+) by adaptive quadrature over the support intervals.
double initial_excess(const InitialProfile& profile, double v_plus);

struct DirichletInitData {
  std::vector<double> vbar0;  // cell means on the wave grid
  MassBudget budget;
};

/// vbar0 = v+ + c m0(x) with c = int (v0 - v+) - u+ B(0); m0 the unit bump on [1, 3].
DirichletInitData build_dirichlet_wave_initdata(const InitialProfile& v0_spec,
                                                const FarFieldState& far_field,
                                                const DampingSchedule& sched, const Grid1D& grid);

struct ParabolicOptions {
  double newton_tol = 1e-10;
  int newton_max_iter = 20;
  double initial_step = 1e-4;   // in rescaled time
  double step_growth = 1.05;
  double step_fraction = 0.005; // ds <= fraction * (s + 1)
};

/// Solves d_s vbar = -(1/alpha) d_xx p(vbar) (forward parabolic since p' < 0) with
/// d_x vbar(0) = 0 and vbar = v+ past the grid, by TR-BDF2 with Newton on a
/// tridiagonal Jacobian, and returns snapshots at sample_times.
WaveProfile dirichlet_diffusion_wave(std::span<const double> vbar0, const FarFieldState& far_field,
                                     const PressureLaw& law, const DampingSchedule& sched,
                                     const Grid1D& grid, std::span<const double> sample_times,
                                     const ParabolicOptions& options = {});

WaveProfile gaussian_linear_wave(const FarFieldState& far_field, double delta0,
                                 const PressureLaw& law, const DampingSchedule& sched);

WaveProfile constant_wave(const FarFieldState& far_field, const PressureLaw& law,
                          const DampingSchedule& sched);

struct ShootingOptions {
  double xi_max = 0.0;      // 0: twelve Gaussian widths, 12 / sqrt((lambda+1)/(4 kappa))
  double tol = 1e-9;
  std::size_t table_intervals = 4096;
  int substeps = 4;         // RK4 steps per table interval
};

/// Self-similar profile phi(xi), xi = x/(1+t)^((lambda+1)/2), solving
/// (p(phi))'' - (alpha (lambda+1)/2) xi phi' = 0, phi(0) = v_boundary, phi(xi_max) = v+,
/// by bisection shooting on phi'(0).
WaveProfile neumann_selfsimilar_profile(double v_boundary, const FarFieldState& far_field,
                                        const PressureLaw& law, const DampingSchedule& sched,
                                        const ShootingOptions& options = {});

/// Profile file, header "# diffwave-profile v1". Only gamma-law profiles can be exported.
io::Table export_profile(const WaveProfile& profile);
WaveProfile import_profile(const io::Table& table);
void save_profile(const std::filesystem::path& path, const WaveProfile& profile);
WaveProfile load_profile(const std::filesystem::path& path);

}  // namespace diffwave
