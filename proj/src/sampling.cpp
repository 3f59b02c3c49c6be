#include "p2dyn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace p2dyn {

double Sampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

ExtComplex Sampler::sphere_point() {
  const double s = uniform(-1.0, 1.0);
  const double phi = uniform(0.0, 2.0 * std::numbers::pi);
  const double rho = std::sqrt(std::max(0.0, 1.0 - s * s));
  return inverse_stereographic({rho * std::cos(phi), rho * std::sin(phi), s});
}

complex Sampler::disk_point(double r_min, double r_max) {
  const double u = uniform(r_min * r_min, r_max * r_max);
  const double phi = uniform(0.0, 2.0 * std::numbers::pi);
  return std::polar(std::sqrt(u), phi);
}

complex Sampler::circle_point() {
  return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi));
}

}  // namespace p2dyn
