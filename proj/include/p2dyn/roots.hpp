#pragma once

#include <span>
#include <vector>

#include "p2dyn/sphere.hpp"

namespace p2dyn {

struct RootOptions {
  double tol = 1e-12;    // stop once every Aberth correction is below this
  int max_sweeps = 500;
};

struct RootReport {
  std::vector<complex> roots;
  int sweeps = 0;
  bool converged = false;
  /// Largest |p(z)| / sum |a_k| |z|^(n-k) over the returned roots.
  double residual = 0.0;
};

/// All roots of a polynomial given by descending coefficients (leading
/// coefficient first, must be nonzero), with multiplicity. Uses the
/// Aberth-Ehrlich simultaneous iteration; trailing zero coefficients are
/// split off as exact roots at 0.
RootReport polynomial_roots(std::span<const complex> coeffs, const RootOptions& opts = {});

/// Horner evaluation of descending coefficients.
complex horner(std::span<const complex> coeffs, complex z);

/// Descending coefficients of prod (z - r_k).
std::vector<complex> poly_from_roots(std::span<const complex> roots);

}  // namespace p2dyn
