#pragma once

#include <cstdint>
#include <vector>

#include "webgeo/ode_system.hpp"

namespace webgeo {

/// Halton low-discrepancy sequence over a box (t uses the first base).
class HaltonSequence {
 public:
  explicit HaltonSequence(int state_dims);
  Point next(const Box& box);

 private:
  std::vector<int> bases_;
  unsigned long long index_ = 0;
};

/// `count` pseudo-random points, uniform over the box shrunk by
/// `margin_frac` of each interval's width on both ends. Deterministic in
/// `seed`.
std::vector<Point> random_points(const Box& box, int count, std::uint64_t seed,
                                 double margin_frac = 0.0);

}  // namespace webgeo
