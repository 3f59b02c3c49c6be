#include "p2dyn/steiner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace p2dyn {

namespace {

using Mat2 = std::array<complex, 4>;  // row-major [[m0, m1], [m2, m3]]

/// Generalized circle as the Hermitian form A|z|^2 + B conj(z) + conj(B) z + D = 0.
struct Hermitian {
  double A;
  complex B;
  double D;
};

/// The form of T^{-1}(curve) for the Moebius map T with matrix m: m^H C m.
Hermitian pullback(const Hermitian& c, const Mat2& m) {
  const Mat2 cm{c.A * m[0] + c.B * m[2], c.A * m[1] + c.B * m[3], std::conj(c.B) * m[0] + c.D * m[2],
                std::conj(c.B) * m[1] + c.D * m[3]};
  const complex r00 = std::conj(m[0]) * cm[0] + std::conj(m[2]) * cm[2];
  const complex r01 = std::conj(m[0]) * cm[1] + std::conj(m[2]) * cm[3];
  const complex r11 = std::conj(m[1]) * cm[1] + std::conj(m[3]) * cm[3];
  return {r00.real(), r01, r11.real()};
}

GeneralizedCircle to_curve(const Hermitian& h) {
  const double scale = std::max({std::abs(h.A), std::abs(h.B), std::abs(h.D)});
  if (std::abs(h.A) <= 1e-13 * scale) {
    const double nb = std::abs(h.B);
    return Line{-h.D * h.B / (2.0 * nb * nb), complex(0.0, 1.0) * h.B / nb};
  }
  const complex center = -h.B / h.A;
  const double r2 = std::norm(center) - h.D / h.A;
  return Circle{center, std::sqrt(std::max(r2, 0.0))};
}

Mat2 normalizing_map(const ExtComplex& p1, const ExtComplex& p2) {
  if (chordal_distance(p1, p2) < 1e-12) throw std::invalid_argument("steiner_net: fixed points coincide");
  if (p2.is_infinite()) return {1.0, -p1.value(), 0.0, 1.0};
  if (p1.is_infinite()) return {0.0, 1.0, 1.0, -p2.value()};
  return {1.0, -p1.value(), 1.0, -p2.value()};
}

double latitude_radius(int j, int n) {
  if (n == 1) return 1.0;
  // 5^(2t - 1) for t in [0, 1] keeps the middle radius exactly 1
  const double t = static_cast<double>(j) / static_cast<double>(n - 1);
  return std::pow(5.0, 2.0 * t - 1.0);
}

}  // namespace

double distance_to(const GeneralizedCircle& c, complex z) {
  if (const auto* circle = std::get_if<Circle>(&c)) return std::abs(std::abs(z - circle->center) - circle->radius);
  const auto& line = std::get<Line>(c);
  return std::abs((std::conj(line.direction) * (z - line.point)).imag());
}

complex nearest_point(const GeneralizedCircle& c, complex z) {
  if (const auto* circle = std::get_if<Circle>(&c)) {
    const complex d = z - circle->center;
    const double r = std::abs(d);
    if (r == 0.0) return circle->center + circle->radius;
    return circle->center + circle->radius * d / r;
  }
  const auto& line = std::get<Line>(c);
  return line.point + line.direction * (std::conj(line.direction) * (z - line.point)).real();
}

bool passes_through(const GeneralizedCircle& c, const ExtComplex& z, double tol) {
  if (z.is_infinite()) return std::holds_alternative<Line>(c);
  return chordal_distance(z, nearest_point(c, z.value())) < tol;
}

double intersection_angle(const GeneralizedCircle& a, const GeneralizedCircle& b) {
  const auto* ca = std::get_if<Circle>(&a);
  const auto* cb = std::get_if<Circle>(&b);
  if (ca && cb) {
    const double d = std::abs(ca->center - cb->center);
    if (d > ca->radius + cb->radius || d < std::abs(ca->radius - cb->radius)) return -1.0;
    const double c = (ca->radius * ca->radius + cb->radius * cb->radius - d * d) / (2.0 * ca->radius * cb->radius);
    return std::acos(std::min(1.0, std::abs(c)));
  }
  if (!ca && !cb) {
    const double c = (std::conj(std::get<Line>(a).direction) * std::get<Line>(b).direction).real();
    return std::acos(std::min(1.0, std::abs(c)));
  }
  const Circle& circle = ca ? *ca : *cb;
  const GeneralizedCircle& line = ca ? b : a;
  const double delta = distance_to(line, circle.center);
  if (delta > circle.radius) return -1.0;
  return std::acos(delta / circle.radius);
}

SteinerNet steiner_net(const ExtComplex& p1, const ExtComplex& p2, int n_meridians, int n_latitudes) {
  if (n_meridians < 0 || n_latitudes < 0) throw std::invalid_argument("steiner_net: negative family size");
  const Mat2 m = normalizing_map(p1, p2);
  SteinerNet net{p1, p2, {}, {}};
  for (int k = 0; k < n_meridians; ++k) {
    const double phi = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_meridians);
    // Im(e^{-i phi} w) = 0
    const Hermitian line{0.0, complex(0.0, 0.5) * std::polar(1.0, phi), 0.0};
    net.meridians.push_back(to_curve(pullback(line, m)));
  }
  for (int j = 0; j < n_latitudes; ++j) {
    const double rho = latitude_radius(j, n_latitudes);
    net.latitudes.push_back(to_curve(pullback(Hermitian{1.0, 0.0, -rho * rho}, m)));
  }
  return net;
}

GeneralizedCircle latitude_through(const ExtComplex& p1, const ExtComplex& p2, const ExtComplex& z) {
  const Mat2 m = normalizing_map(p1, p2);
  if (z.is_infinite()) {
    if (m[2] == complex(0.0)) throw std::invalid_argument("latitude_through: point is a fixed point");
    const double rho = std::abs(m[0] / m[2]);
    return to_curve(pullback(Hermitian{1.0, 0.0, -rho * rho}, m));
  }
  const complex num = m[0] * z.value() + m[1];
  const complex den = m[2] * z.value() + m[3];
  if (num == complex(0.0) || den == complex(0.0)) throw std::invalid_argument("latitude_through: point is a fixed point");
  const double rho = std::abs(num / den);
  return to_curve(pullback(Hermitian{1.0, 0.0, -rho * rho}, m));
}

}  // namespace p2dyn
