#include "p2dyn/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "p2dyn/roots.hpp"
#include "p2dyn/sampling.hpp"

namespace p2dyn {

namespace {

bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(std::span<const complex> zs, const char* what) {
  for (const complex& z : zs) {
    if (!finite(z)) throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
}

/// Running product of num/den factors with a separate binary exponent, so
/// long products neither overflow nor underflow before the end. Exact zeros
/// of numerators and denominators are counted instead of multiplied in.
class ScaledProduct {
 public:
  void mul(complex num, complex den) {
    if (num == complex(0.0)) {
      ++zeros_;
    } else {
      m_ *= num;
    }
    if (den == complex(0.0)) {
      ++poles_;
    } else {
      m_ /= den;
    }
    renormalize();
  }

  void mul(complex factor) { mul(factor, 1.0); }

  bool indeterminate() const { return zeros_ > 0 && zeros_ == poles_; }

  ExtComplex value() const {
    if (zeros_ > poles_) return ExtComplex(0.0);
    if (poles_ > zeros_) return ExtComplex::infinity();
    if (exp2_ > 600) return ExtComplex::infinity();
    if (exp2_ < -1100) return ExtComplex(0.0);
    return ExtComplex(complex(std::ldexp(m_.real(), exp2_), std::ldexp(m_.imag(), exp2_)));
  }

 private:
  void renormalize() {
    const double mag = std::max(std::abs(m_.real()), std::abs(m_.imag()));
    if (mag == 0.0 || (mag > 1e-100 && mag < 1e100)) return;
    int e = 0;
    std::frexp(mag, &e);
    m_ = complex(std::ldexp(m_.real(), -e), std::ldexp(m_.imag(), -e));
    exp2_ += e;
  }

  complex m_{1.0, 0.0};
  int exp2_ = 0;
  int zeros_ = 0;
  int poles_ = 0;
};

// In each factor routine `big` selects the chart w = 1/z (w = 0 at infinity);
// numerator and denominator are then both multiplied by the matching power of w.
struct Point {
  bool big;
  complex z;  // z when !big, w = 1/z when big
};

Point chart(const ExtComplex& z) {
  if (z.is_infinite()) return {true, 0.0};
  const complex v = z.value();
  if (std::abs(v) <= 1.0) return {false, v};
  return {true, 1.0 / v};
}

ScaledProduct product(const MoebiusRotation& g, Point p) {
  ScaledProduct s;
  const complex phase = std::polar(1.0, g.theta());
  if (!p.big) {
    s.mul(phase * (g.a() * p.z + g.b()), -std::conj(g.b()) * p.z + std::conj(g.a()));
  } else {
    s.mul(phase * (g.a() + g.b() * p.z), -std::conj(g.b()) + std::conj(g.a()) * p.z);
  }
  return s;
}

ScaledProduct product(const CanonicalMap& c, Point p) {
  ScaledProduct s;
  s.mul(std::polar(1.0, c.alpha()));
  for (const complex& a : c.zeros()) {
    if (!p.big) {
      s.mul(p.z - a, 1.0 + std::conj(a) * p.z);
    } else {
      s.mul(1.0 - a * p.z, p.z + std::conj(a));
    }
  }
  for (int k = 0; k < c.zeros_at_infinity(); ++k) {
    if (!p.big) {
      s.mul(-1.0, p.z);
    } else {
      s.mul(-p.z);
    }
  }
  return s;
}

ScaledProduct product(const HInvariantBlaschke& f, Point p) {
  ScaledProduct s;
  s.mul(std::polar(1.0, f.theta()));
  for (int k = 0; k < 2 * f.p() + 1; ++k) {
    if (!p.big) {
      s.mul(p.z);
    } else {
      s.mul(1.0, p.z);
    }
  }
  const complex u = p.z * p.z;
  for (const complex& a : f.zeros()) {
    const complex a2 = a * a;
    if (!p.big) {
      s.mul(u - a2, 1.0 - std::conj(a2) * u);
    } else {
      s.mul(1.0 - a2 * u, u - std::conj(a2));
    }
  }
  return s;
}

ScaledProduct product(const RationalForm1& f, Point p) {
  const std::vector<complex>& a = f.coeffs();
  const std::vector<complex> d = f.denominator();
  complex num, den;
  if (!p.big) {
    num = horner(a, p.z);
    den = horner(d, p.z);
  } else {
    // w^N P(1/w) and w^N Q(1/w) are the coefficient-reversed polynomials
    std::vector<complex> ra(a.rbegin(), a.rend());
    std::vector<complex> rd(d.rbegin(), d.rend());
    num = horner(ra, p.z);
    den = horner(rd, p.z);
  }
  ScaledProduct s;
  s.mul(std::polar(1.0, f.theta()));
  s.mul(num, den);
  return s;
}

ScaledProduct product(const FiniteBlaschke& f, Point p) {
  ScaledProduct s;
  s.mul(std::polar(1.0, f.theta()));
  for (const complex& a : f.zeros()) {
    if (!p.big) {
      s.mul(p.z - a, 1.0 - std::conj(a) * p.z);
    } else {
      s.mul(1.0 - a * p.z, p.z - std::conj(a));
    }
  }
  return s;
}

ScaledProduct product(const InfiniteBlaschke& b, Point p) {
  ScaledProduct s;
  for (const complex& a : b.zeros()) {
    if (a == complex(0.0)) {
      if (!p.big) {
        s.mul(p.z);
      } else {
        s.mul(1.0, p.z);
      }
      continue;
    }
    const complex unit = std::conj(a) / std::abs(a);
    if (!p.big) {
      s.mul(unit * (a - p.z), 1.0 - std::conj(a) * p.z);
    } else {
      s.mul(unit * (a * p.z - 1.0), p.z - std::conj(a));
    }
  }
  return s;
}

}  // namespace

MoebiusRotation::MoebiusRotation(double theta, complex a, complex b, bool conj)
    : theta_(reduce_phase(theta)), a_(a), b_(b), conj_(conj) {
  if (!std::isfinite(theta) || !finite(a) || !finite(b)) {
    throw std::invalid_argument("moebius: non-finite parameter");
  }
  if (std::abs(a) + std::abs(b) == 0.0) throw std::invalid_argument("moebius: a and b are both zero");
}

RationalForm1::RationalForm1(double theta, std::vector<complex> coeffs, bool conj)
    : theta_(reduce_phase(theta)), coeffs_(std::move(coeffs)), conj_(conj) {
  if (!std::isfinite(theta)) throw std::invalid_argument("form1: non-finite theta");
  require_finite(coeffs_, "form1");
  if (coeffs_.size() < 2 || coeffs_.size() % 2 != 0) {
    throw std::invalid_argument("form1: need an even number of coefficients (odd degree 2n+1)");
  }
  if (std::abs(coeffs_.front()) + std::abs(coeffs_.back()) == 0.0) {
    throw std::invalid_argument("form1: |a0| + |a_{2n+1}| must be nonzero");
  }
}

std::vector<complex> RationalForm1::denominator() const {
  const std::size_t n = coeffs_.size() - 1;
  std::vector<complex> d(n + 1);
  // descending index i holds the coefficient of z^{n-i}; it pairs with a_{n-i}
  for (std::size_t i = 0; i <= n; ++i) {
    const double sign = (i % 2 == 0) ? -1.0 : 1.0;
    d[i] = sign * std::conj(coeffs_[n - i]);
  }
  return d;
}

CanonicalMap::CanonicalMap(double alpha, std::vector<complex> zeros, int zeros_at_infinity, bool conj)
    : alpha_(reduce_phase(alpha)), zeros_(std::move(zeros)), zeros_at_infinity_(zeros_at_infinity), conj_(conj) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("canonical: non-finite alpha");
  require_finite(zeros_, "canonical");
  if (zeros_at_infinity_ < 0) throw std::invalid_argument("canonical: negative count of zeros at infinity");
  if ((zeros_.size() + static_cast<std::size_t>(zeros_at_infinity_)) % 2 != 1) {
    throw std::invalid_argument("canonical: zero count must be odd");
  }
  std::sort(zeros_.begin(), zeros_.end(), [](complex x, complex y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax < ay;
    return std::arg(x) < std::arg(y);
  });
}

HInvariantBlaschke::HInvariantBlaschke(double theta, int p, std::vector<complex> zeros, bool conj)
    : theta_(reduce_phase(theta)), p_(p), zeros_(std::move(zeros)), conj_(conj) {
  if (!std::isfinite(theta)) throw std::invalid_argument("blaschke: non-finite theta");
  if (p_ < 0) throw std::invalid_argument("blaschke: p must be nonnegative");
  require_finite(zeros_, "blaschke");
  for (const complex& z : zeros_) {
    const double r = std::abs(z);
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("blaschke: every zero needs 0 < |z_k| < 1");
  }
}

FiniteBlaschke::FiniteBlaschke(double theta, std::vector<complex> zeros, bool conj)
    : theta_(reduce_phase(theta)), zeros_(std::move(zeros)), conj_(conj) {
  if (!std::isfinite(theta)) throw std::invalid_argument("finite_blaschke: non-finite theta");
  require_finite(zeros_, "finite_blaschke");
  if (zeros_.empty()) throw std::invalid_argument("finite_blaschke: at least one zero is required");
  for (const complex& z : zeros_) {
    if (!(std::abs(z) < 1.0)) throw std::invalid_argument("finite_blaschke: every zero needs |z_k| < 1");
  }
}

bool is_conj(const DianalyticMap& map) {
  return std::visit([](const auto& m) { return m.conj(); }, map);
}

ExtComplex evaluate(const DianalyticMap& map, const ExtComplex& z) {
  const ExtComplex x = is_conj(map) ? z.conj() : z;
  auto run = [&](const ExtComplex& at) {
    return std::visit([&](const auto& m) { return product(m, chart(at)); }, map);
  };
  ScaledProduct s = run(x);
  if (!s.indeterminate()) {
    const ExtComplex w = s.value();
    // Blaschke products send the circle onto itself. Rounding would otherwise
    // push |w| off 1 by a factor of the degree per step under iteration.
    const bool inner = std::holds_alternative<HInvariantBlaschke>(map) || std::holds_alternative<FiniteBlaschke>(map) ||
                       std::holds_alternative<InfiniteBlaschke>(map);
    if (inner && x.is_finite() && w.is_finite() && std::abs(x.abs() - 1.0) <= kCircleTolerance && w.abs() > 0.0) {
      return ExtComplex(w.value() / w.abs());
    }
    return w;
  }
  // A zero of one factor meets a pole of another. The pair multiplies to a
  // constant, so a tiny displacement recovers the value.
  const ExtComplex nudged = x.is_infinite() ? ExtComplex(1e12) : ExtComplex(x.value() + 1e-10 * (1.0 + x.abs()));
  return run(nudged).value();
}

int degree(const DianalyticMap& map) {
  struct Visitor {
    int operator()(const MoebiusRotation&) const { return 1; }
    int operator()(const CanonicalMap& c) const {
      return static_cast<int>(c.zeros().size()) + c.zeros_at_infinity();
    }
    int operator()(const HInvariantBlaschke& f) const {
      return 2 * f.p() + 1 + 2 * static_cast<int>(f.zeros().size());
    }
    int operator()(const RationalForm1& f) const { return f.odd_degree(); }
    int operator()(const FiniteBlaschke& f) const { return static_cast<int>(f.zeros().size()); }
    int operator()(const InfiniteBlaschke&) const {
      throw std::invalid_argument("degree: an infinite Blaschke product has no finite degree");
    }
  };
  return std::visit(Visitor{}, map);
}

InvarianceReport is_h_invariant(const DianalyticMap& map, int sample_count, double tol, std::uint64_t seed) {
  if (sample_count < 1) throw std::invalid_argument("is_h_invariant: sample_count must be >= 1");
  Sampler sampler(seed);
  InvarianceReport report;
  for (int k = 0; k < sample_count; ++k) {
    const ExtComplex z = sampler.sphere_point();
    const double defect = chordal_distance(evaluate(map, h_involution(z)), h_involution(evaluate(map, z)));
    if (defect > report.max_defect || k == 0) {
      report.max_defect = defect;
      report.worst_point = z;
    }
  }
  report.pass = report.max_defect < tol;
  return report;
}

bool validate_form1(std::span<const complex> num, std::span<const complex> den, double tol) {
  if (num.size() != den.size()) throw std::invalid_argument("validate_form1: length mismatch");
  if (num.empty()) return false;
  const std::size_t n = num.size() - 1;
  for (std::size_t j = 0; j <= n; ++j) {
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;
    if (std::abs(den[j] - sign * std::conj(num[n - j])) > tol) return false;
  }
  return true;
}

CanonicalizeResult canonicalize(const RationalForm1& f, double root_tol) {
  const std::vector<complex>& a = f.coeffs();
  std::size_t lead = 0;
  while (a[lead] == complex(0.0)) ++lead;  // stops: |a0| + |aN| != 0
  const CanonicalBranch branch = lead == 0 ? CanonicalBranch::Numerator : CanonicalBranch::Denominator;

  const std::span<const complex> numerator(a.data() + lead, a.size() - lead);
  const RootReport roots = polynomial_roots(numerator, RootOptions{root_tol, 500});
  if (!roots.converged) {
    std::ostringstream msg;
    msg << "canonicalize: root finder did not converge after " << roots.sweeps << " sweeps (residual "
        << roots.residual << ")";
    throw NonConvergence(msg.str(), roots.residual);
  }

  std::vector<complex> zeros = roots.roots;
  // rounding dust on exactly-real or exactly-imaginary roots is dropped
  for (complex& z : zeros) {
    const double scale = 1e-14 * std::max(1.0, std::abs(z));
    if (std::abs(z.real()) < scale) z.real(0.0);
    if (std::abs(z.imag()) < scale) z.imag(0.0);
  }
  const double alpha = f.theta() + 2.0 * std::arg(a[lead]);
  CanonicalMap map(alpha, std::move(zeros), static_cast<int>(lead), f.conj());

  double residual = 0.0;
  Sampler sampler(0x5eed);
  for (int k = 0; k < 100; ++k) {
    const ExtComplex z = sampler.sphere_point();
    residual = std::max(residual, chordal_distance(evaluate(map, z), evaluate(f, z)));
  }
  return {std::move(map), branch, roots.sweeps, residual};
}

RationalForm1 expand(const CanonicalMap& c) {
  std::vector<complex> coeffs(static_cast<std::size_t>(c.zeros_at_infinity()), complex(0.0));
  const std::vector<complex> monic = poly_from_roots(c.zeros());
  coeffs.insert(coeffs.end(), monic.begin(), monic.end());
  return RationalForm1(c.alpha(), std::move(coeffs), c.conj());
}

std::string PairingResult::message() const {
  if (ok()) return "paired";
  std::ostringstream os;
  if (!unpaired.empty()) {
    os << (unpaired.size() == 1 ? "unpaired zero at index " : "unpaired zeros at indices ");
    for (std::size_t k = 0; k < unpaired.size(); ++k) os << (k ? ", " : "") << unpaired[k];
  }
  if (zeros_at_origin % 2 == 0) {
    if (!unpaired.empty()) os << "; ";
    os << "even number of zeros at the origin (" << zeros_at_origin << ")";
  }
  return os.str();
}

PairingResult pair_zeros(std::span<const complex> zeros, double tol) {
  PairingResult out;
  std::vector<bool> used(zeros.size(), false);
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (std::abs(zeros[i]) <= tol) {
      used[i] = true;
      ++out.zeros_at_origin;
    }
  }
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (used[i]) continue;
    std::size_t best = zeros.size();
    double best_gap = tol;
    for (std::size_t j = i + 1; j < zeros.size(); ++j) {
      if (used[j]) continue;
      const double gap = std::abs(zeros[i] + zeros[j]);
      if (gap <= best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    used[i] = true;
    if (best == zeros.size()) {
      out.unpaired.push_back(i);
    } else {
      used[best] = true;
      out.pairs.emplace_back(i, best);
    }
  }
  return out;
}

}  // namespace p2dyn
