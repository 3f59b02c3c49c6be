#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "p2dyn/maps.hpp"
#include "p2dyn/sphere.hpp"

namespace p2dyn {

inline constexpr double kDefaultEps = 1e-6;
inline constexpr int kDefaultMaxIter = 200;

enum class Basin : std::uint8_t { Zero, Infinity, Undecided };

const char* to_string(Basin b);

/// The 0 <-> infinity swap; Undecided is fixed.
Basin swapped(Basin b);

struct PointClass {
  Basin basin;
  int time;  // step at which a threshold was first met (max_iter when Undecided)
  friend bool operator==(const PointClass&, const PointClass&) = default;
};

/// Iterates until |z_n| < eps, |z_n| > 1/eps or max_iter steps. Thresholds are
/// checked before the first step, so time 0 is possible. Requires degree >= 3
/// and eps in (0, 1).
PointClass classify_point(const HInvariantBlaschke& map, const ExtComplex& z, int max_iter = kDefaultMaxIter,
                          double eps = kDefaultEps);

struct SchwarzReport {
  bool pass = false;
  double min_gap = 0.0;  // min over samples of |z| - |F(z)|
  int violations = 0;
};

/// Samples the unit disk minus a 1e-6 ball at the origin and checks |F(z)| < |z|.
SchwarzReport schwarz_check(const HInvariantBlaschke& map, int samples, std::uint64_t seed = 7);

/// Axis-aligned rectangle of the z-plane.
struct Window {
  complex center{0.0, 0.0};
  double width = 4.0;
  double height = 4.0;

  double x_min() const { return center.real() - 0.5 * width; }
  double y_max() const { return center.imag() + 0.5 * height; }
};

struct Resolution {
  int w;
  int h;
};

/// Center of pixel (i, j); row j = 0 is the top edge (largest imaginary part).
complex pixel_center(const Window& win, const Resolution& res, int i, int j);

struct BasinField {
  Window window;
  Resolution resolution;
  std::vector<PointClass> cells;  // row-major, top row first

  const PointClass& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * resolution.w + i]; }
  double pixel_width() const { return window.width / resolution.w; }
  double pixel_height() const { return window.height / resolution.h; }
};

/// classify_point at every pixel center. Rows are spread across `threads`
/// workers (0 picks the hardware count); the grid never depends on scheduling.
BasinField basin_field(const HInvariantBlaschke& map, const Window& window, const Resolution& res,
                       int max_iter = kDefaultMaxIter, double eps = kDefaultEps, unsigned threads = 0);

struct JuliaEstimate {
  std::vector<std::pair<int, int>> boundary_pixels;  // (i, j)
  double mean_radius = 0.0;
  double max_abs_dev = 0.0;  // max | |z| - 1 | over boundary pixel centers
};

/// Decided cells with a 4-neighbour of the opposite decided class. Throws
/// std::domain_error when either decided class is missing.
JuliaEstimate julia_boundary(const BasinField& field);

struct AntipodalReport {
  bool pass = false;
  int decided_pairs = 0;
  int mismatches = 0;
};

/// class(h(z)) must be the 0 <-> infinity swap of class(z) whenever both are decided.
AntipodalReport basin_antipodal_symmetry(const HInvariantBlaschke& map, int samples, int max_iter = kDefaultMaxIter,
                                         double eps = kDefaultEps, std::uint64_t seed = 11);

struct P2Cell {
  int i;
  int j;
  PointClass cls;
  /// Set on cells touching the unit circle: the cell holding the antipode -z.
  std::optional<std::pair<int, int>> antipode;
};

/// The closed unit disk as a fundamental domain of P2.
struct P2Field {
  Window window;
  Resolution resolution;
  std::vector<P2Cell> cells;
};

/// Keeps the pixels with |z| <= 1. Throws std::invalid_argument when the
/// window does not cover the closed unit disk.
P2Field project_field_p2(const BasinField& field);

struct DiskInvarianceReport {
  bool pass = false;
  double max_abs = 0.0;    // largest |B(z)| seen
  double max_bound = 0.0;  // largest truncation bound used
  int samples = 0;
};

/// Random |z| <= 0.9 must satisfy |B(z)| < 1 up to the truncation bound.
DiskInvarianceReport invariant_disk_check(const InfiniteBlaschke& b, int samples, double tail_bound,
                                          std::uint64_t seed = 13);

/// One JSON object per line: {"step", "re", "im", "abs"}; infinity is written
/// with null coordinates and "infinite": true.
void write_orbit_jsonl(std::ostream& os, const std::vector<ExtComplex>& points);

}  // namespace p2dyn
