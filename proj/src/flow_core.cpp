#include "worldline/flow_core.hpp"

namespace worldline {

IntersectionResult intersection_count(const Worldline& x1, const Worldline& x2,
                                      std::span<const double> grid, double zero_tolerance) {
  if (&x1.family() != &x2.family() && x1.family_id() != x2.family_id()) {
    throw ValidationError("worldlines belong to different families");
  }
  const Interval I1 = x1.interval();
  const Interval I2 = x2.interval();
  if (I1.lo != I2.lo || I1.hi != I2.hi) {
    throw ValidationError("worldlines are defined on different intervals");
  }

  IntersectionResult result;
  if (x1.parameter() == x2.parameter()) {
    result.identical = true;
    result.consistent = true;
    return result;
  }

  const Eigen::Index n = x1.family().dim();
  std::vector<VectorXd> diffs;
  diffs.reserve(grid.size());
  for (double t : grid) diffs.push_back(x1(t) - x2(t));

  int best = 0;
  for (Eigen::Index c = 0; c < n; ++c) {
    int count = 0;
    int last_sign = 0;
    bool in_zero_run = false;
    for (const auto& d : diffs) {
      const double v = d[c];
      if (std::abs(v) <= zero_tolerance) {
        if (!in_zero_run) ++count;
        in_zero_run = true;
        continue;
      }
      const int sign = v > 0 ? 1 : -1;
      // A zero run between opposite signs is a single crossing already counted.
      if (!in_zero_run && last_sign != 0 && sign != last_sign) ++count;
      in_zero_run = false;
      last_sign = sign;
    }
    best = std::max(best, count);
  }
  result.count = best;
  result.consistent = best < x1.family().order();
  return result;
}

}  // namespace worldline
