#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffwave/correction.hpp"
#include "diffwave/grid.hpp"
#include "diffwave/solver.hpp"
#include "diffwave/waves.hpp"

namespace diffwave {

/// Perturbation of a solver state from wave + correction, on the cell centres.
///
/// d = v - vbar - vhat uses cell means throughout so that sum(d) dx is the
/// discrete perturbed mass. omega(x) = -int_x^L d, omega_x = d, and higher x
/// derivatives are centred differences of d with a parity ghost at x = 0
/// (dirichlet: d even, z odd; neumann: d odd, z even) and zero past x = L.
struct PerturbationFields {
  double t = 0.0;
  std::vector<double> omega, omega_x, omega_xx, omega_xxx;
  std::vector<double> z, z_x, z_xx;
  /// sum(d) dx; equals -omega(0).
  double mass = 0.0;
};

PerturbationFields perturbation_fields(const State& snapshot, const Grid1D& grid,
                                       const WaveProfile& wave, const CorrectionPair& corr,
                                       Boundary boundary);

enum class NormKind { L1, L2, Linf };
double norm(std::span<const double> field, const Grid1D& grid, NormKind which);

enum class DecayRegime { dirichlet, neumann, neumann_constant };
const char* to_string(DecayRegime r) noexcept;

enum class Quantity { v_Linf, u_Linf, omega_k_L2, omegat_k_L2 };

struct RateOptions {
  double epsilon = 0.05;   // slack at the critical lambda
  std::optional<double> b; // supercritical integrated weight; default: interval midpoint
};

struct RatePrediction {
  DecayRegime regime = DecayRegime::dirichlet;
  Quantity quantity = Quantity::v_Linf;
  int k = 0;
  double lambda = 0.0;
  std::string branch;
  /// Decay power of (1+t) for the norm itself; empty when no rate is stated.
  std::optional<double> exponent;
  double epsilon_slack = 0.0;
};

RatePrediction predicted_rate(DecayRegime regime, Quantity quantity, int k, double lambda,
                              const RateOptions& options = {});

struct IntegratedTerm {
  bool omega_t = false;  // false: d_x^k omega, true: d_x^k omega_t (= z)
  int k = 0;
  double weight = 0.0;
};

/// Weights on squared L2 norms, as the energy estimates state them.
struct WeightTable {
  std::string branch;
  std::array<double, 4> omega{};
  std::array<double, 3> omega_t{};
  /// Allowed growth (1+t)^slack of the pointwise terms (epsilon at the critical point, else 0).
  double pointwise_slack = 0.0;
  std::vector<IntegratedTerm> integrated;
  /// The time integrals may grow like (1+t)^integral_growth.
  double integral_growth = 0.0;
  std::optional<double> b;
};

WeightTable theorem_weights(DecayRegime regime, double lambda, const RateOptions& options = {});

/// Squared L2 norms of the perturbation at one sample time.
struct NormRecord {
  double t = 0.0;
  std::array<double, 4> omega_sq{};
  std::array<double, 3> z_sq{};
};

NormRecord norm_record(const PerturbationFields& fields, const Grid1D& grid);

struct FunctionalSeries {
  std::string name;
  bool integrated = false;
  /// Exponent the boundedness check applies: weighted = (1+t)^claimed * raw.
  double claimed_exponent = 0.0;
  std::vector<double> t;
  std::vector<double> raw;
  std::vector<double> weighted;
};

/// Every term of the table: (1+t)^w ||d_x^k omega||^2, (1+t)^w ||d_x^k z||^2 and the
/// trapezoid-accumulated time integrals scaled by their allowed growth.
std::vector<FunctionalSeries> weighted_energy_series(std::span<const NormRecord> records,
                                                     const WeightTable& table);

struct DecayFit {
  double exponent = 0.0;
  double r2 = 0.0;
  std::size_t count = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// Least-squares slope of log(value) against log(1+t) over t in [t_lo, t_hi];
/// the exponent is the negated slope. Needs >= 8 samples, all positive.
DecayFit fit_decay(std::span<const double> t, std::span<const double> value, double t_lo,
                   double t_hi);

struct Boundedness {
  double supremum = 0.0;
  double final_decade_slope = 0.0;
  bool pass = false;
};

/// w = (1+t)^claimed * value; passes when the log-log slope of w over the final
/// decade of (1+t) is at most `max_slope`.
Boundedness boundedness_check(std::span<const double> t, std::span<const double> value,
                              double claimed_exponent, double max_slope = 0.1);

struct ExponentEntry {
  std::string quantity;
  DecayFit fit;
  std::optional<double> predicted;
  std::optional<double> margin;     // fitted - predicted
  std::optional<double> tolerance;
  std::optional<bool> pass;
  std::string error;                // set when the fit could not be made
};

struct FunctionalEntry {
  std::string name;
  bool integrated = false;
  double claimed_exponent = 0.0;
  Boundedness check;
};

struct DecayReport {
  DecayRegime regime = DecayRegime::dirichlet;
  double lambda = 0.0;
  std::string branch;
  std::vector<ExponentEntry> exponents;
  std::vector<FunctionalEntry> functionals;
  std::string config_hash;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

}  // namespace diffwave
