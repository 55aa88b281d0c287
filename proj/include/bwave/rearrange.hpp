#pragma once

#include <span>
#include <vector>

#include "bwave/grid.hpp"

namespace bwave {

/// Discrete Schwarz symmetrization of |u|. Ranked values (descending, ties
/// by original index) are placed at center, center-1, center+1, center-2,
/// center+2, ... with center = n/2.
Field symmetric_decreasing(const Field& u);

/// The same rearrangement on a bare sample sequence with center size/2.
std::vector<double> rearrange_samples(std::span<const double> values);

/// (f*, -g*): f non-negative and g non-positive, both symmetric-decreasing in
/// magnitude about the grid center.
FieldPair project_pair(const FieldPair& p);

/// Largest violation of "non-increasing away from the center, symmetric to
/// within one sample". Zero for an exact rearrangement.
double symmetric_decreasing_defect(const Field& u);

}  // namespace bwave
