#include "p2dyn/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace p2dyn {

ExtComplex::ExtComplex(complex z) {
  if (std::isnan(z.real()) || std::isnan(z.imag())) {
    throw std::domain_error("ExtComplex: NaN coordinate");
  }
  if (std::isinf(z.real()) || std::isinf(z.imag()) || std::abs(z) > kInfinityThreshold) {
    infinite_ = true;
    return;
  }
  z_ = z;
}

complex ExtComplex::value() const {
  if (infinite_) throw std::domain_error("ExtComplex: value() at infinity");
  return z_;
}

double ExtComplex::abs() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : std::abs(z_);
}

std::ostream& operator<<(std::ostream& os, const ExtComplex& z) {
  if (z.is_infinite()) return os << "inf";
  return os << z.value();
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

ExtComplex h_involution(const ExtComplex& z) {
  if (z.is_infinite()) return ExtComplex(0.0);
  const complex v = z.value();
  if (v == complex(0.0, 0.0)) return ExtComplex::infinity();
  return ExtComplex(-1.0 / std::conj(v));
}

double chordal_distance(const ExtComplex& z, const ExtComplex& w) {
  if (z.is_infinite() && w.is_infinite()) return 0.0;
  if (z.is_infinite()) return 2.0 / std::hypot(1.0, w.abs());
  if (w.is_infinite()) return 2.0 / std::hypot(1.0, z.abs());
  const complex a = z.value();
  const complex b = w.value();
  // hypot keeps the denominator finite all the way to the promotion threshold
  const double d = 2.0 * std::abs(a - b) / (std::hypot(1.0, std::abs(a)) * std::hypot(1.0, std::abs(b)));
  return std::min(d, 2.0);
}

Vec3 stereographic(const ExtComplex& z) {
  if (z.is_infinite()) return {0.0, 0.0, 1.0};
  const complex v = z.value();
  const double r2 = std::norm(v);
  const double den = 1.0 + r2;
  return {2.0 * v.real() / den, 2.0 * v.imag() / den, (r2 - 1.0) / den};
}

ExtComplex inverse_stereographic(const Vec3& p) {
  const double n = p.norm();
  const Vec3 u = p * (1.0 / n);
  if (u.z >= 1.0) return ExtComplex::infinity();
  // (x + iy) / (1 - s), written to stay accurate in the southern hemisphere
  return ExtComplex(complex(u.x, u.y) / (1.0 - u.z));
}

P2Point project_p2(const ExtComplex& z) {
  if (z.is_infinite()) return P2Point(complex(0.0, 0.0));
  const complex v = z.value();
  const double r = std::abs(v);
  if (r < 1.0 - kCircleTolerance) return P2Point(v);
  if (r > 1.0 + kCircleTolerance) return P2Point(h_involution(z).value());
  // on the circle h(z) = -z up to rounding; keep arg in [0, pi)
  const double a = std::arg(v);
  if (a >= 0.0 && a < std::numbers::pi) return P2Point(v);
  return P2Point(-v);
}

double p2_distance(const P2Point& p, const P2Point& q) {
  const ExtComplex a(p.rep());
  const ExtComplex b(q.rep());
  return std::min(chordal_distance(a, b), chordal_distance(a, h_involution(b)));
}

double reduce_phase(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

}  // namespace p2dyn
