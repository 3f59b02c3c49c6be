#pragma once

#include <variant>
#include <vector>

#include "p2dyn/sphere.hpp"

namespace p2dyn {

struct Circle {
  complex center;
  double radius;
};

/// The line {point + t * direction}, direction of unit length.
struct Line {
  complex point;
  complex direction;
};

/// A circle of the Riemann sphere: a Euclidean circle or a line through infinity.
using GeneralizedCircle = std::variant<Circle, Line>;

/// Euclidean distance from a finite point to the curve.
double distance_to(const GeneralizedCircle& c, complex z);

/// Nearest point of the curve to a finite point.
complex nearest_point(const GeneralizedCircle& c, complex z);

/// Whether the curve passes through z (lines contain infinity), within tol
/// in the chordal metric.
bool passes_through(const GeneralizedCircle& c, const ExtComplex& z, double tol);

/// Intersection angle in [0, pi/2]; for disjoint curves returns -1.
double intersection_angle(const GeneralizedCircle& a, const GeneralizedCircle& b);

/// The orthogonal double family attached to two fixed points p1 != p2:
/// meridians pass through both, latitudes separate them.
struct SteinerNet {
  ExtComplex p1, p2;
  std::vector<GeneralizedCircle> meridians;
  std::vector<GeneralizedCircle> latitudes;
};

/// Meridians are preimages of lines through 0 at angles k pi / n_meridians
/// under M(z) = (z - p1)/(z - p2); latitudes are preimages of the circles
/// |w| = rho_j with rho spaced geometrically over [0.2, 5].
SteinerNet steiner_net(const ExtComplex& p1, const ExtComplex& p2, int n_meridians, int n_latitudes);

/// The latitude of the (p1, p2) net through a point distinct from both.
GeneralizedCircle latitude_through(const ExtComplex& p1, const ExtComplex& p2, const ExtComplex& z);

}  // namespace p2dyn
