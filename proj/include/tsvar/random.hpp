#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "tsvar/grid_function.hpp"
#include "tsvar/timescale.hpp"

namespace tsvar {

/// Random time scale with a point count uniform in [min_points, max_points]
/// and gaps drawn log-uniformly from [min_gap, max_gap].
template <class Rng>
TimeScale random_timescale(Rng& rng, std::size_t min_points, std::size_t max_points,
                           double min_gap = 1e-3, double max_gap = 10.0) {
  std::uniform_int_distribution<std::size_t> count(min_points, max_points);
  std::uniform_real_distribution<double> log_gap(std::log(min_gap), std::log(max_gap));
  std::uniform_real_distribution<double> start(-5.0, 5.0);
  const std::size_t n = count(rng);
  std::vector<double> points(n);
  points[0] = start(rng);
  for (std::size_t i = 1; i < n; ++i) points[i] = points[i - 1] + std::exp(log_gap(rng));
  return TimeScale(std::move(points));
}

/// Values uniform in [lo, hi] at every point.
template <class Rng>
GridFunction random_grid_function(Rng& rng, const TimeScale& ts, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::vector<double> values(ts.size());
  for (double& v : values) v = value(rng);
  return GridFunction(ts, std::move(values));
}

}  // namespace tsvar
