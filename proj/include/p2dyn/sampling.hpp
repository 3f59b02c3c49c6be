#pragma once

#include <cstdint>
#include <random>

#include "p2dyn/sphere.hpp"

namespace p2dyn {

/// Seeded source of the random points used by the sampling checks. Every
/// report that samples takes a seed so runs are reproducible.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);

  /// Uniform with respect to area on the unit sphere.
  ExtComplex sphere_point();

  /// Uniform with respect to area in the annulus r_min < |z| < r_max.
  complex disk_point(double r_min, double r_max);

  complex circle_point();

 private:
  std::mt19937_64 rng_;
};

}  // namespace p2dyn
