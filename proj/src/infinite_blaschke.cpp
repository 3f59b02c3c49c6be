#include <algorithm>
#include <cmath>
#include <limits>

#include "p2dyn/maps.hpp"

namespace p2dyn {

namespace {

double term(const ModulusLaw& law, std::int64_t k) {
  const double r = law(k);
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("modulus law must return values in [0, 1)");
  return 1.0 - r;
}

struct PowerFit {
  double exponent;
  double tail;  // estimated sum of terms beyond the horizon
};

// Fits t_k ~ C k^-s between horizon/10 and horizon.
PowerFit fit_tail(const ModulusLaw& law, std::int64_t horizon) {
  const std::int64_t k0 = std::max<std::int64_t>(1, horizon / 10);
  if (k0 >= horizon) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()};
  const double t0 = term(law, k0);
  const double t1 = term(law, horizon);
  const double s = std::log(t0 / t1) / std::log(static_cast<double>(horizon) / static_cast<double>(k0));
  if (!(s > 1.05)) return {s, std::numeric_limits<double>::infinity()};
  return {s, t1 * static_cast<double>(horizon) / (s - 1.0)};
}

}  // namespace

InfiniteBlaschke::InfiniteBlaschke(std::vector<complex> zeros, bool pair_symmetric, double tail_mass, bool conj)
    : zeros_(std::move(zeros)), pair_symmetric_(pair_symmetric), tail_mass_(tail_mass), conj_(conj) {
  for (const complex& z : zeros_) {
    if (!(std::abs(z) < 1.0)) throw std::invalid_argument("infinite blaschke: every zero needs |z_k| < 1");
  }
  if (!(tail_mass_ >= 0.0) || !std::isfinite(tail_mass_)) {
    throw std::invalid_argument("infinite blaschke: tail mass must be finite and nonnegative");
  }
  if (pair_symmetric_) {
    const PairingResult pairing = pair_zeros(zeros_, 1e-12);
    if (!pairing.ok()) throw std::invalid_argument("infinite blaschke: " + pairing.message());
  }
}

InfiniteBlaschke InfiniteBlaschke::from_modulus_law(const ModulusLaw& law, std::int64_t count, bool pair_symmetric,
                                                    std::int64_t horizon) {
  if (count < 0 || horizon <= count) {
    throw std::invalid_argument("from_modulus_law: need 0 <= count < horizon");
  }
  std::vector<complex> zeros;
  for (std::int64_t k = 1; k <= count; ++k) {
    const double r = 1.0 - term(law, k);
    zeros.emplace_back(r);
    if (pair_symmetric && r > 0.0) zeros.emplace_back(-r);
  }
  double tail = 0.0;
  for (std::int64_t k = count + 1; k <= horizon; ++k) {
    const double t = term(law, k);
    tail += (pair_symmetric && t < 1.0) ? 2.0 * t : t;
  }
  const PowerFit fit = fit_tail(law, horizon);
  if (!std::isfinite(fit.tail)) throw std::invalid_argument("from_modulus_law: law does not satisfy sum (1 - |z_k|) < inf");
  tail += pair_symmetric ? 2.0 * fit.tail : fit.tail;
  return InfiniteBlaschke(std::move(zeros), pair_symmetric, tail);
}

ConvergenceReport check_convergence(std::span<const complex> prefix, std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("check_convergence: horizon must be >= 1");
  ConvergenceReport out;
  const std::size_t n = std::min(prefix.size(), static_cast<std::size_t>(horizon));
  for (std::size_t k = 0; k < n; ++k) out.partial_sum += 1.0 - std::abs(prefix[k]);
  for (std::size_t k = n; k < prefix.size(); ++k) out.tail_estimate += 1.0 - std::abs(prefix[k]);
  out.converges = true;
  out.decay_exponent = std::numeric_limits<double>::infinity();
  return out;
}

ConvergenceReport check_convergence(const ModulusLaw& law, std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("check_convergence: horizon must be >= 1");
  ConvergenceReport out;
  for (std::int64_t k = 1; k <= horizon; ++k) out.partial_sum += term(law, k);
  const PowerFit fit = fit_tail(law, horizon);
  out.decay_exponent = fit.exponent;
  out.tail_estimate = fit.tail;
  out.converges = std::isfinite(fit.tail);
  return out;
}

TruncatedValue eval_truncated(const InfiniteBlaschke& b, complex z, double r, double tail_bound) {
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("eval_truncated: need 0 <= r < 1");
  if (std::abs(z) > r) throw std::invalid_argument("eval_truncated: |z| exceeds the declared radius r");
  if (!(tail_bound > 0.0)) throw std::invalid_argument("eval_truncated: tail_bound must be positive");
  if (b.conj()) z = std::conj(z);

  const std::vector<complex>& zeros = b.zeros();
  const std::size_t n = zeros.size();
  // suffix[k] = sum over zeros with index >= k, plus the mass beyond the prefix
  std::vector<double> suffix(n + 1, b.tail_mass());
  for (std::size_t k = n; k > 0; --k) suffix[k - 1] = suffix[k] + (1.0 - std::abs(zeros[k - 1]));

  const double scale = 2.0 / (1.0 - r);
  std::size_t used = 0;
  while (used < n && scale * suffix[used] >= tail_bound) ++used;
  if (scale * suffix[used] >= tail_bound) {
    throw std::domain_error("eval_truncated: tail bound unreachable with the stored prefix");
  }

  complex value = 1.0;
  for (std::size_t k = 0; k < used; ++k) {
    const complex a = zeros[k];
    if (a == complex(0.0)) {
      value *= z;
    } else {
      value *= (std::conj(a) / std::abs(a)) * (a - z) / (1.0 - std::conj(a) * z);
    }
  }
  return {value, scale * suffix[used], used};
}

}  // namespace p2dyn
