#include "bwave/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace bwave {

namespace {

// Sample indices ordered by distance from the center: c, c-1, c+1, c-2, ...
std::vector<std::size_t> placement_order(std::size_t size) {
  const auto n = static_cast<std::ptrdiff_t>(size);
  const auto c = n / 2;
  std::vector<std::size_t> order;
  order.reserve(size);
  order.push_back(static_cast<std::size_t>(c));
  for (std::ptrdiff_t k = 1; static_cast<std::ptrdiff_t>(order.size()) < n; ++k) {
    if (c - k >= 0) order.push_back(static_cast<std::size_t>(c - k));
    if (c + k < n) order.push_back(static_cast<std::size_t>(c + k));
  }
  return order;
}

}  // namespace

std::vector<double> rearrange_samples(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> mag(n);
  for (std::size_t j = 0; j < n; ++j) mag[j] = std::abs(values[j]);

  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(),
                   [&mag](std::size_t i, std::size_t j) { return mag[i] > mag[j]; });

  const auto slots = placement_order(n);
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) out[slots[r]] = mag[rank[r]];
  return out;
}

Field symmetric_decreasing(const Field& u) {
  return Field(u.grid(), rearrange_samples(u.samples()));
}

FieldPair project_pair(const FieldPair& p) {
  return {symmetric_decreasing(p.f), -symmetric_decreasing(p.g)};
}

double symmetric_decreasing_defect(const Field& u) {
  const auto slots = placement_order(u.size());
  double defect = 0.0;
  double running_min = u[slots[0]];
  for (std::size_t r = 2; r < slots.size(); ++r) {
    running_min = std::min(running_min, u[slots[r - 2]]);
    defect = std::max(defect, u[slots[r]] - running_min);
  }
  return defect;
}

}  // namespace bwave
