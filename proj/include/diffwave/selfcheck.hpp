#pragma once

#include <string>
#include <vector>

namespace diffwave {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double limit = 0.0;
};

/// Fast analytic-identity checks: kernel ODE, B' = beta, correction
/// conservation/damping, Gaussian mass, and the self-similar linear limit.
std::vector<CheckResult> run_identity_checks();

}  // namespace diffwave
