#include "p2dyn/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace p2dyn {

namespace {

struct HornerPair {
  complex p;
  complex dp;
  double bound;  // sum |a_k| |z|^(n-k), the scale of rounding error in p
};

HornerPair horner_with_derivative(std::span<const complex> a, complex z) {
  complex p = a[0];
  complex dp = 0.0;
  double bound = std::abs(a[0]);
  const double r = std::abs(z);
  for (std::size_t k = 1; k < a.size(); ++k) {
    dp = dp * z + p;
    p = p * z + a[k];
    bound = bound * r + std::abs(a[k]);
  }
  return {p, dp, bound};
}

}  // namespace

complex horner(std::span<const complex> coeffs, complex z) {
  complex p = 0.0;
  for (const complex& c : coeffs) p = p * z + c;
  return p;
}

std::vector<complex> poly_from_roots(std::span<const complex> roots) {
  std::vector<complex> c{1.0};
  for (const complex& r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] -= r * c[k - 1];
  }
  return c;
}

RootReport polynomial_roots(std::span<const complex> coeffs, const RootOptions& opts) {
  if (coeffs.empty() || coeffs[0] == complex(0.0)) {
    throw std::invalid_argument("polynomial_roots: leading coefficient is zero");
  }
  RootReport out;
  std::size_t end = coeffs.size();
  while (end > 1 && coeffs[end - 1] == complex(0.0)) {
    out.roots.emplace_back(0.0);
    --end;
  }
  const std::span<const complex> a = coeffs.first(end);
  const std::size_t n = a.size() - 1;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  if (n == 1) {
    out.roots.push_back(-a[1] / a[0]);
    out.converged = true;
    return out;
  }

  double radius = 0.0;
  for (std::size_t k = 1; k <= n; ++k) radius = std::max(radius, std::abs(a[k] / a[0]));
  radius += 1.0;

  // starting points on a circle, rotated off the real axis to break symmetry
  std::vector<complex> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(radius * (1.0 + 0.01 * static_cast<double>(k) / static_cast<double>(n)), phi);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double floor_factor = 8.0 * static_cast<double>(n) * eps;
  std::vector<bool> done(n, false);
  int sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const HornerPair hp = horner_with_derivative(a, z[k]);
      if (std::abs(hp.p) <= floor_factor * hp.bound) {
        done[k] = true;
        continue;
      }
      complex sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      }
      complex w;
      if (hp.dp == complex(0.0)) {
        w = complex(1e-3 * (1.0 + std::abs(z[k])), 0.0);
      } else {
        const complex ratio = hp.p / hp.dp;
        w = ratio / (1.0 - ratio * sum);
      }
      z[k] -= w;
      if (std::abs(w) < opts.tol) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done && std::all_of(done.begin(), done.end(), [](bool d) { return d; })) {
      out.converged = true;
      ++sweep;
      break;
    }
  }
  out.sweeps = sweep;
  for (const complex& r : z) {
    const HornerPair hp = horner_with_derivative(a, r);
    out.residual = std::max(out.residual, std::abs(hp.p) / hp.bound);
    out.roots.push_back(r);
  }
  return out;
}

}  // namespace p2dyn
