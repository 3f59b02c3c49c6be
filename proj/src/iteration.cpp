#include "p2dyn/iteration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "json.hpp"
#include "p2dyn/sampling.hpp"

namespace p2dyn {

namespace {

void require_dynamics_preconditions(const HInvariantBlaschke& map, double eps) {
  if (degree(map) < 3) throw std::invalid_argument("iteration dynamics need deg(F) >= 3");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
}

PointClass classify(const DianalyticMap& map, ExtComplex z, int max_iter, double eps) {
  const double far = 1.0 / eps;
  for (int t = 0;; ++t) {
    const double r = z.abs();
    if (r < eps) return {Basin::Zero, t};
    if (r > far) return {Basin::Infinity, t};
    if (t >= max_iter) return {Basin::Undecided, max_iter};
    z = evaluate(map, z);
  }
}

bool opposite(Basin a, Basin b) {
  return (a == Basin::Zero && b == Basin::Infinity) || (a == Basin::Infinity && b == Basin::Zero);
}

}  // namespace

const char* to_string(Basin b) {
  switch (b) {
    case Basin::Zero:
      return "zero";
    case Basin::Infinity:
      return "infinity";
    case Basin::Undecided:
      return "undecided";
  }
  return "?";
}

Basin swapped(Basin b) {
  if (b == Basin::Zero) return Basin::Infinity;
  if (b == Basin::Infinity) return Basin::Zero;
  return b;
}

PointClass classify_point(const HInvariantBlaschke& map, const ExtComplex& z, int max_iter, double eps) {
  require_dynamics_preconditions(map, eps);
  if (max_iter < 0) throw std::invalid_argument("max_iter must be >= 0");
  return classify(DianalyticMap(map), z, max_iter, eps);
}

SchwarzReport schwarz_check(const HInvariantBlaschke& map, int samples, std::uint64_t seed) {
  require_dynamics_preconditions(map, 0.5);
  if (samples < 1) throw std::invalid_argument("schwarz_check: samples must be >= 1");
  const DianalyticMap m(map);
  Sampler sampler(seed);
  SchwarzReport report;
  report.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const complex z = sampler.disk_point(1e-6, 1.0);
    const double gap = std::abs(z) - evaluate(m, z).abs();
    report.min_gap = std::min(report.min_gap, gap);
    if (!(gap > 0.0)) ++report.violations;
  }
  report.pass = report.violations == 0;
  return report;
}

complex pixel_center(const Window& win, const Resolution& res, int i, int j) {
  const double x = win.x_min() + (i + 0.5) * win.width / res.w;
  const double y = win.y_max() - (j + 0.5) * win.height / res.h;
  return {x, y};
}

BasinField basin_field(const HInvariantBlaschke& map, const Window& window, const Resolution& res, int max_iter,
                       double eps, unsigned threads) {
  require_dynamics_preconditions(map, eps);
  if (res.w < 1 || res.h < 1) throw std::invalid_argument("basin_field: resolution must be positive");
  if (!(window.width > 0.0 && window.height > 0.0)) throw std::invalid_argument("basin_field: empty window");

  BasinField field{window, res, std::vector<PointClass>(static_cast<std::size_t>(res.w) * res.h)};
  const DianalyticMap m(map);
  std::atomic<int> next_row{0};
  auto worker = [&] {
    for (int j = next_row++; j < res.h; j = next_row++) {
      for (int i = 0; i < res.w; ++i) {
        field.cells[static_cast<std::size_t>(j) * res.w + i] = classify(m, pixel_center(window, res, i, j), max_iter, eps);
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(res.h));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return field;
}

JuliaEstimate julia_boundary(const BasinField& field) {
  bool has_zero = false, has_inf = false;
  for (const PointClass& c : field.cells) {
    has_zero |= c.basin == Basin::Zero;
    has_inf |= c.basin == Basin::Infinity;
  }
  if (!has_zero || !has_inf) {
    throw std::domain_error(std::string("julia_boundary: field has no ") + (has_zero ? "infinity" : "zero") +
                            "-basin cells");
  }
  const int w = field.resolution.w, h = field.resolution.h;
  JuliaEstimate est;
  double sum = 0.0;
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const Basin b = field.at(i, j).basin;
      if (b == Basin::Undecided) continue;
      const bool edge = (i > 0 && opposite(b, field.at(i - 1, j).basin)) ||
                        (i + 1 < w && opposite(b, field.at(i + 1, j).basin)) ||
                        (j > 0 && opposite(b, field.at(i, j - 1).basin)) ||
                        (j + 1 < h && opposite(b, field.at(i, j + 1).basin));
      if (!edge) continue;
      est.boundary_pixels.emplace_back(i, j);
      const double r = std::abs(pixel_center(field.window, field.resolution, i, j));
      sum += r;
      est.max_abs_dev = std::max(est.max_abs_dev, std::abs(r - 1.0));
    }
  }
  if (est.boundary_pixels.empty()) {
    throw std::domain_error("julia_boundary: the two basins never touch (undecided band in between)");
  }
  est.mean_radius = sum / static_cast<double>(est.boundary_pixels.size());
  return est;
}

AntipodalReport basin_antipodal_symmetry(const HInvariantBlaschke& map, int samples, int max_iter, double eps,
                                         std::uint64_t seed) {
  require_dynamics_preconditions(map, eps);
  if (samples < 1) throw std::invalid_argument("basin_antipodal_symmetry: samples must be >= 1");
  const DianalyticMap m(map);
  Sampler sampler(seed);
  AntipodalReport report;
  for (int k = 0; k < samples; ++k) {
    const ExtComplex z = sampler.sphere_point();
    const PointClass a = classify(m, z, max_iter, eps);
    const PointClass b = classify(m, h_involution(z), max_iter, eps);
    if (a.basin == Basin::Undecided || b.basin == Basin::Undecided) continue;
    ++report.decided_pairs;
    if (b.basin != swapped(a.basin)) ++report.mismatches;
  }
  report.pass = report.mismatches == 0;
  return report;
}

P2Field project_field_p2(const BasinField& field) {
  const Window& win = field.window;
  const double x_max = win.x_min() + win.width;
  const double y_min = win.y_max() - win.height;
  if (win.x_min() > -1.0 || x_max < 1.0 || y_min > -1.0 || win.y_max() < 1.0) {
    throw std::invalid_argument("project_field_p2: window does not cover the closed unit disk");
  }
  const Resolution& res = field.resolution;
  const double pw = field.pixel_width(), ph = field.pixel_height();
  const double half_diag = 0.5 * std::hypot(pw, ph);
  P2Field out{win, res, {}};
  for (int j = 0; j < res.h; ++j) {
    for (int i = 0; i < res.w; ++i) {
      const complex z = pixel_center(win, res, i, j);
      const double r = std::abs(z);
      if (r > 1.0) continue;
      P2Cell cell{i, j, field.at(i, j), std::nullopt};
      if (1.0 - r <= half_diag) {
        const int ai = std::clamp(static_cast<int>(std::floor((-z.real() - win.x_min()) / pw)), 0, res.w - 1);
        const int aj = std::clamp(static_cast<int>(std::floor((win.y_max() + z.imag()) / ph)), 0, res.h - 1);
        cell.antipode = std::make_pair(ai, aj);
      }
      out.cells.push_back(cell);
    }
  }
  return out;
}

DiskInvarianceReport invariant_disk_check(const InfiniteBlaschke& b, int samples, double tail_bound,
                                          std::uint64_t seed) {
  if (b.zeros().empty()) throw std::invalid_argument("invariant_disk_check: the product needs at least one zero");
  if (samples < 1) throw std::invalid_argument("invariant_disk_check: samples must be >= 1");
  constexpr double radius = 0.9;
  Sampler sampler(seed);
  DiskInvarianceReport report;
  report.pass = true;
  for (int k = 0; k < samples; ++k) {
    const complex z = sampler.disk_point(0.0, radius);
    const TruncatedValue v = eval_truncated(b, z, radius, tail_bound);
    const double a = std::abs(v.value);
    report.max_abs = std::max(report.max_abs, a);
    report.max_bound = std::max(report.max_bound, v.bound);
    if (!(a < 1.0 + v.bound)) report.pass = false;
    ++report.samples;
  }
  return report;
}

void write_orbit_jsonl(std::ostream& os, const std::vector<ExtComplex>& points) {
  for (std::size_t k = 0; k < points.size(); ++k) {
    nlohmann::ordered_json rec;
    rec["step"] = k;
    if (points[k].is_infinite()) {
      rec["re"] = nullptr;
      rec["im"] = nullptr;
      rec["abs"] = nullptr;
      rec["infinite"] = true;
    } else {
      rec["re"] = points[k].re();
      rec["im"] = points[k].im();
      rec["abs"] = points[k].abs();
    }
    os << rec.dump() << '\n';
  }
}

}  // namespace p2dyn
