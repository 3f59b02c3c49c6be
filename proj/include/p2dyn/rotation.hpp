#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "p2dyn/maps.hpp"
#include "p2dyn/sphere.hpp"

namespace p2dyn {

/// Raised by operations that need a non-identity rotation.
class IdentityMap : public std::invalid_argument {
 public:
  IdentityMap() : std::invalid_argument("the rotation is the identity; every point is fixed") {}
};

struct Quaternion {
  double w = 1, x = 0, y = 0, z = 0;

  double norm() const;
  Quaternion operator*(const Quaternion& o) const;
  /// Sign fixed so that w > 0, or the first nonzero component is positive.
  Quaternion sign_normalized() const;
  Vec3 rotate(const Vec3& v) const;
};

/// Unit axis, angle in [0, pi] and the matching unit quaternion.
struct RotationDescriptor {
  Vec3 axis;
  double angle = 0.0;
  Quaternion quaternion;
};

/// The SU(2) matrix [[alpha, beta], [-conj(beta), conj(alpha)]] of G.
std::pair<complex, complex> su2_entries(const MoebiusRotation& g);

/// Unit quaternion of the sphere rotation induced by G, sign normalized.
Quaternion to_quaternion(const MoebiusRotation& g);

/// The rotation by `angle` (right-handed) about `axis`, as a moebius map e^{i theta}(az + b)/(-conj(b)z + conj(a)).
MoebiusRotation from_axis_angle(const Vec3& axis, double angle);

/// Whether G is the identity up to `tol` on its normalized SU(2) entries.
bool is_identity(const MoebiusRotation& g, double tol = 1e-12);

/// Both solutions of G(z) = z, ordered by (arg in [0, 2pi), |z|), infinity last.
/// Throws IdentityMap; conj-flagged maps are not rotations and are rejected.
std::pair<ExtComplex, ExtComplex> fixed_points(const MoebiusRotation& g);

RotationDescriptor rotation_descriptor(const MoebiusRotation& g);

/// g1 after g2, renormalized to theta = 0 and |a|^2 + |b|^2 = 1.
MoebiusRotation compose(const MoebiusRotation& g1, const MoebiusRotation& g2);

struct Rational {
  long p;
  long q;
  friend bool operator==(const Rational&, const Rational&) = default;
};
struct Irrational {
  friend bool operator==(const Irrational&, const Irrational&) = default;
};
using RotationClass = std::variant<Rational, Irrational>;

/// Continued-fraction test of angle / 2pi against fractions with q <= q_max.
RotationClass classify_rotation(double angle, long q_max = 64, double tol = 1e-9);

/// Smallest n <= n_max with chordal(G^n(z0), z0) < tol.
std::optional<int> period_on_sphere(const MoebiusRotation& g, const ExtComplex& z0, int n_max, double tol = 1e-9);

struct P2Period {
  int period;
  bool halved;  // the projected orbit closed through h(z0) rather than z0
};

/// Smallest m <= n_max with G^m(z0) within tol of z0 or of h(z0).
std::optional<P2Period> period_on_p2(const MoebiusRotation& g, const ExtComplex& z0, int n_max, double tol = 1e-9);

/// [z0, F(z0), ..., F^n(z0)].
std::vector<ExtComplex> orbit(const DianalyticMap& map, const ExtComplex& z0, int n);

}  // namespace p2dyn
