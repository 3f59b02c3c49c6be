#pragma once

#include <complex>
#include <iosfwd>

namespace p2dyn {

using complex = std::complex<double>;

/// Moduli above this are promoted to the point at infinity.
inline constexpr double kInfinityThreshold = 1e154;

/// Tolerance used to decide |z| = 1 when picking P2 representatives.
inline constexpr double kCircleTolerance = 1e-12;

/// A point of the Riemann sphere: a finite complex number or the single
/// point at infinity. Finite values never carry NaN or infinite parts.
class ExtComplex {
 public:
  constexpr ExtComplex() = default;
  ExtComplex(complex z);  // NOLINT(google-explicit-constructor)
  ExtComplex(double re, double im = 0.0) : ExtComplex(complex(re, im)) {}  // NOLINT

  static constexpr ExtComplex infinity() {
    ExtComplex p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  /// The finite value; throws std::domain_error at infinity.
  complex value() const;
  double re() const { return value().real(); }
  double im() const { return value().imag(); }

  /// |z|, +inf at the point at infinity.
  double abs() const;

  ExtComplex conj() const { return infinite_ ? *this : ExtComplex(std::conj(z_)); }

  friend bool operator==(const ExtComplex& a, const ExtComplex& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.z_ == b.z_;
  }

 private:
  complex z_{0.0, 0.0};
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtComplex& z);

struct Vec3 {
  double x = 0, y = 0, z = 0;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

/// The antipodal involution h(z) = -1/conj(z), swapping 0 and infinity.
ExtComplex h_involution(const ExtComplex& z);

/// Chord length between the stereographic images of z and w, in [0, 2].
double chordal_distance(const ExtComplex& z, const ExtComplex& w);

/// Unit-sphere image with infinity at the north pole (0, 0, 1).
Vec3 stereographic(const ExtComplex& z);

/// Inverse of stereographic(); the input is normalized first.
ExtComplex inverse_stereographic(const Vec3& p);

/// A point of the real projective plane, stored by its canonical
/// representative: |rep| < 1, or |rep| = 1 with arg(rep) in [0, pi).
class P2Point {
 public:
  const complex& rep() const { return rep_; }

  friend P2Point project_p2(const ExtComplex& z);
  friend bool operator==(const P2Point&, const P2Point&) = default;

 private:
  explicit P2Point(complex rep) : rep_(rep) {}
  complex rep_;
};

P2Point project_p2(const ExtComplex& z);

/// Chordal distance between the two lifts that are closest.
double p2_distance(const P2Point& p, const P2Point& q);

/// Reduce a phase into [0, 2pi).
double reduce_phase(double x);

}  // namespace p2dyn
