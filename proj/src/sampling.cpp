#include "bwave/sampling.hpp"

#include <cmath>

namespace bwave {

Field random_bump_field(const Grid& grid, Rng& rng, double amplitude, bool non_negative,
                        int bumps) {
  const double quarter = 0.125 * grid.length();
  std::uniform_real_distribution<double> center(-quarter, quarter);
  std::uniform_real_distribution<double> width(0.6, 2.5);
  std::uniform_real_distribution<double> amp(non_negative ? 0.0 : -amplitude, amplitude);

  Field out(grid);
  for (int b = 0; b < bumps; ++b) {
    const double x0 = center(rng);
    const double w = width(rng);
    const double h = amp(rng);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double z = (grid.x(j) - x0) / w;
      out[j] += h * std::exp(-0.5 * z * z);
    }
  }
  return out;
}

FieldPair random_pair(const Grid& grid, Rng& rng, double amplitude, bool non_negative) {
  Field f = random_bump_field(grid, rng, amplitude, non_negative);
  Field g = random_bump_field(grid, rng, amplitude, non_negative);
  return {std::move(f), std::move(g)};
}

}  // namespace bwave
