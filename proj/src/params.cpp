#include "bwave/params.hpp"

#include <cmath>
#include <stdexcept>

namespace bwave {

std::string RegimeReport::summary() const {
  if (accepted) return "accepted";
  std::string s = "rejected:";
  for (const auto& v : violations) s += " " + v;
  return s;
}

Coefficients abcd_from_model(const ModelParams& p) {
  if (!(p.theta >= 0.0 && p.theta <= 1.0)) {
    throw std::invalid_argument("theta must lie in [0, 1]");
  }
  if (!(p.tau_bond >= 0.0)) throw std::invalid_argument("Bond number must be non-negative");

  const double t2 = p.theta * p.theta;
  Coefficients co;
  co.a = 0.5 * (t2 - 1.0 / 3.0) * p.lambda_model;
  co.b = 0.5 * (t2 - 1.0 / 3.0) * (1.0 - p.lambda_model);
  co.c = 0.5 * (1.0 - t2) * p.mu_model - p.tau_bond;
  co.d = 0.5 * (1.0 - t2) * (1.0 - p.mu_model);
  return co;
}

// Coefficients produced by the model map carry roundoff; anything this close
// to zero is treated as zero.
constexpr double kZeroCoefficient = 1e-12;

RegimeReport validate_solver_regime(const Coefficients& co) {
  RegimeReport r;
  if (!(co.a < -kZeroCoefficient)) r.violations.emplace_back("a>=0");
  if (co.b != 0.0) r.violations.emplace_back("b!=0");
  if (!(co.c < -kZeroCoefficient)) r.violations.emplace_back("c>=0");
  if (co.d != 0.0) r.violations.emplace_back("d!=0");
  r.accepted = r.violations.empty();
  return r;
}

}  // namespace bwave
