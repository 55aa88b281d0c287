#include "support.hpp"

#include <unistd.h>

namespace bwave::test {

const ReferenceSolve& reference_solve() {
  static const ReferenceSolve ref = [] {
    ReferenceSolve r;
    const Field h = seed_profile();
    r.bounds = bounds_report(r.a, r.c, 1.0, h);
    r.mu = 4.0 * r.bounds.mu0;
    r.bounds = bounds_report(r.a, r.c, r.mu, h);
    r.grid = auto_minimizer_grid(r.a, r.c, r.mu, 2048, 200.0, h);
    r.result = minimize(r.a, r.c, r.mu, r.grid, MinimizerConfig{}, h);
    return r;
  }();
  return ref;
}

}  // namespace bwave::test
