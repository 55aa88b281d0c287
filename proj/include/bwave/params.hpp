#pragma once

#include <string>
#include <vector>

namespace bwave {

// Inputs of the four-parameter Boussinesq family. theta is the height at
// which the horizontal velocity is measured; tau_bond is the Bond number.
struct ModelParams {
  double theta = 0.0;
  double lambda_model = 1.0;
  double mu_model = 1.0;
  double tau_bond = 0.0;
};

// Coefficients a, b, c, d of the abcd system.
struct Coefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

struct RegimeReport {
  bool accepted = false;
  std::vector<std::string> violations;

  std::string summary() const;
};

/// Maps modeling parameters to (a, b, c, d), including the surface-tension
/// correction of c. Throws std::invalid_argument when theta is outside [0,1]
/// or the Bond number is negative.
Coefficients abcd_from_model(const ModelParams& p);

/// The solver handles a < 0, c < 0, b = d = 0 only. Rejection is reported,
/// never thrown.
RegimeReport validate_solver_regime(const Coefficients& co);

}  // namespace bwave
