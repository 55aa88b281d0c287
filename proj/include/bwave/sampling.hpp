#pragma once

#include <cstdint>
#include <random>

#include "bwave/grid.hpp"

namespace bwave {

using Rng = std::mt19937_64;

// Smooth localized random fields: sums of Gaussian bumps with centers in
// the middle quarter of the domain, widths in [0.6, 2.5] and amplitudes in
// [-amplitude, amplitude] (or [0, amplitude] when non_negative).
Field random_bump_field(const Grid& grid, Rng& rng, double amplitude = 1.0,
                        bool non_negative = false, int bumps = 3);

FieldPair random_pair(const Grid& grid, Rng& rng, double amplitude = 1.0,
                      bool non_negative = false);

}  // namespace bwave
