#include "p2dyn/rotation.hpp"

#include <cmath>
#include <numbers>

namespace p2dyn {

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::operator*(const Quaternion& o) const {
  return {w * o.w - x * o.x - y * o.y - z * o.z,
          w * o.x + x * o.w + y * o.z - z * o.y,
          w * o.y - x * o.z + y * o.w + z * o.x,
          w * o.z + x * o.y - y * o.x + z * o.w};
}

Quaternion Quaternion::sign_normalized() const {
  for (double c : {w, x, y, z}) {
    if (c > 0.0) return *this;
    if (c < 0.0) return {-w, -x, -y, -z};
  }
  return *this;
}

Vec3 Quaternion::rotate(const Vec3& v) const {
  // v' = v + 2 u x (u x v + w v), u = (x, y, z)
  const Vec3 u{x, y, z};
  const Vec3 t{u.y * v.z - u.z * v.y + w * v.x, u.z * v.x - u.x * v.z + w * v.y, u.x * v.y - u.y * v.x + w * v.z};
  return {v.x + 2.0 * (u.y * t.z - u.z * t.y), v.y + 2.0 * (u.z * t.x - u.x * t.z), v.z + 2.0 * (u.x * t.y - u.y * t.x)};
}

std::pair<complex, complex> su2_entries(const MoebiusRotation& g) {
  const double n = std::hypot(std::abs(g.a()), std::abs(g.b()));
  const complex half_phase = std::polar(1.0, 0.5 * g.theta());
  return {half_phase * g.a() / n, half_phase * g.b() / n};
}

Quaternion to_quaternion(const MoebiusRotation& g) {
  const auto [alpha, beta] = su2_entries(g);
  // multiplication by e^{i phi} turns the sphere by +phi about the north
  // pole; the beta terms follow from the half-turns z -> (z -+ 1)/(1 +- z)
  Quaternion q{alpha.real(), beta.imag(), -beta.real(), alpha.imag()};
  const double n = q.norm();
  q = {q.w / n, q.x / n, q.y / n, q.z / n};
  return q.sign_normalized();
}

MoebiusRotation from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle) / n;
  return MoebiusRotation(0.0, complex(c, s * axis.z), complex(-s * axis.y, s * axis.x));
}

bool is_identity(const MoebiusRotation& g, double tol) {
  if (g.conj()) return false;
  const auto [alpha, beta] = su2_entries(g);
  return std::abs(beta) < tol && std::abs(alpha.imag()) < tol;
}

namespace {

void require_rotation(const MoebiusRotation& g) {
  if (g.conj()) throw std::invalid_argument("conj-flagged map is orientation reversing, not a rotation");
  if (is_identity(g)) throw IdentityMap();
}

double arg_2pi(const ExtComplex& z) { return reduce_phase(std::arg(z.value())); }

}  // namespace

std::pair<ExtComplex, ExtComplex> fixed_points(const MoebiusRotation& g) {
  require_rotation(g);
  const auto [alpha, beta] = su2_entries(g);
  ExtComplex p1, p2;
  if (beta == complex(0.0)) {
    p1 = ExtComplex(0.0);
    p2 = ExtComplex::infinity();
  } else {
    // conj(beta) z^2 + 2i Im(alpha) z + beta = 0, solved without cancellation
    const double im = alpha.imag();
    const double s = std::hypot(im, std::abs(beta));
    const double t = im + std::copysign(s, im == 0.0 ? 1.0 : im);
    p1 = ExtComplex(complex(0.0, -t) / std::conj(beta));
    p2 = ExtComplex(complex(0.0, 1.0) * beta / t);
  }
  auto before = [](const ExtComplex& u, const ExtComplex& v) {
    if (u.is_infinite()) return false;
    if (v.is_infinite()) return true;
    const double au = arg_2pi(u), av = arg_2pi(v);
    if (au != av) return au < av;
    return u.abs() < v.abs();
  };
  if (before(p2, p1)) std::swap(p1, p2);
  return {p1, p2};
}

RotationDescriptor rotation_descriptor(const MoebiusRotation& g) {
  require_rotation(g);
  RotationDescriptor d;
  d.quaternion = to_quaternion(g);
  const Vec3 v{d.quaternion.x, d.quaternion.y, d.quaternion.z};
  d.angle = 2.0 * std::atan2(v.norm(), d.quaternion.w);
  const auto [p1, p2] = fixed_points(g);
  const Vec3 s1 = stereographic(p1);
  d.axis = s1.dot(v) >= 0.0 ? s1 : stereographic(p2);
  return d;
}

MoebiusRotation compose(const MoebiusRotation& g1, const MoebiusRotation& g2) {
  const auto [a1, b1] = su2_entries(g1);
  auto [a2, b2] = su2_entries(g2);
  if (g1.conj()) {
    a2 = std::conj(a2);
    b2 = std::conj(b2);
  }
  complex a = a1 * a2 - b1 * std::conj(b2);
  complex b = a1 * b2 + b1 * std::conj(a2);
  const double n = std::hypot(std::abs(a), std::abs(b));
  return MoebiusRotation(0.0, a / n, b / n, g1.conj() != g2.conj());
}

RotationClass classify_rotation(double angle, long q_max, double tol) {
  const double x = reduce_phase(angle) / (2.0 * std::numbers::pi);
  // convergents h/k of the continued fraction of x
  long h2 = 0, h1 = 1;
  long k2 = 1, k1 = 0;
  double rest = x;
  for (int step = 0; step < 64; ++step) {
    const double a_real = std::floor(rest);
    if (step > 0 && a_real > static_cast<double>(q_max)) break;
    const long a = static_cast<long>(a_real);
    const long h = a * h1 + h2;
    const long k = a * k1 + k2;
    if (k > q_max) break;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) < tol) {
      return Rational{((h % k) + k) % k, k};
    }
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const double frac = rest - a_real;
    if (frac <= 0.0) break;
    rest = 1.0 / frac;
  }
  return Irrational{};
}

std::optional<int> period_on_sphere(const MoebiusRotation& g, const ExtComplex& z0, int n_max, double tol) {
  if (n_max < 1) throw std::invalid_argument("period_on_sphere: n_max must be >= 1");
  const DianalyticMap map = g;
  ExtComplex z = z0;
  for (int n = 1; n <= n_max; ++n) {
    z = evaluate(map, z);
    if (chordal_distance(z, z0) < tol) return n;
  }
  return std::nullopt;
}

std::optional<P2Period> period_on_p2(const MoebiusRotation& g, const ExtComplex& z0, int n_max, double tol) {
  if (n_max < 1) throw std::invalid_argument("period_on_p2: n_max must be >= 1");
  const DianalyticMap map = g;
  const ExtComplex antipode = h_involution(z0);
  ExtComplex z = z0;
  for (int m = 1; m <= n_max; ++m) {
    z = evaluate(map, z);
    if (chordal_distance(z, z0) < tol) return P2Period{m, false};
    if (chordal_distance(z, antipode) < tol) return P2Period{m, true};
  }
  return std::nullopt;
}

std::vector<ExtComplex> orbit(const DianalyticMap& map, const ExtComplex& z0, int n) {
  if (n < 0) throw std::invalid_argument("orbit: n must be >= 0");
  std::vector<ExtComplex> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(z0);
  for (int k = 0; k < n; ++k) out.push_back(evaluate(map, out.back()));
  return out;
}

}  // namespace p2dyn
