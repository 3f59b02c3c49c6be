#include "p2dyn/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace p2dyn {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("Image: dimensions must be positive");
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  pixels_[static_cast<std::size_t>(y) * width_ + x] = c;
}

Image render_basin(const BasinField& field, const Palette& palette) {
  if (field.cells.empty()) throw std::invalid_argument("render_basin: empty field");
  Image img(field.resolution.w, field.resolution.h);
  auto shade = [](Rgb base, int t) {
    const double lightness = std::clamp(255.0 * std::pow(0.97, t), 32.0, 255.0);
    auto ch = [&](std::uint8_t c) { return static_cast<std::uint8_t>(std::lround(c * lightness / 255.0)); };
    return Rgb{ch(base.r), ch(base.g), ch(base.b)};
  };
  for (int j = 0; j < field.resolution.h; ++j) {
    for (int i = 0; i < field.resolution.w; ++i) {
      const PointClass& c = field.at(i, j);
      switch (c.basin) {
        case Basin::Zero:
          img.set(i, j, shade(palette.zero_hue, c.time));
          break;
        case Basin::Infinity:
          img.set(i, j, shade(palette.infinity_hue, c.time));
          break;
        case Basin::Undecided:
          img.set(i, j, palette.undecided);
          break;
      }
    }
  }
  return img;
}

namespace {

struct PixelFrame {
  double x_min, y_max, pw, ph;

  // continuous pixel coordinates; pixel centers sit on integers
  double px(complex z) const { return (z.real() - x_min) / pw - 0.5; }
  double py(complex z) const { return (y_max - z.imag()) / ph - 0.5; }
};

void bresenham(Image& img, long x0, long y0, long x1, long y1, Rgb color) {
  const long dx = std::labs(x1 - x0), dy = -std::labs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  for (;;) {
    img.set(static_cast<int>(x0), static_cast<int>(y0), color);
    if (x0 == x1 && y0 == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

// Clips p + t d, t in [t0, t1], to the raster extended by one pixel
// (Liang-Barsky), then rasterizes what is left.
void draw_clipped(Image& img, double x, double y, double dx, double dy, double t0, double t1, Rgb color) {
  const double lo_x = -1.0, hi_x = img.width(), lo_y = -1.0, hi_y = img.height();
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
    return true;
  };
  if (!clip(-dx, x - lo_x) || !clip(dx, hi_x - x) || !clip(-dy, y - lo_y) || !clip(dy, hi_y - y)) return;
  if (t0 > t1) return;
  bresenham(img, std::lround(x + t0 * dx), std::lround(y + t0 * dy), std::lround(x + t1 * dx),
            std::lround(y + t1 * dy), color);
}

void midpoint_circle(Image& img, long cx, long cy, long r, Rgb color) {
  auto plot8 = [&](long x, long y) {
    const long pts[8][2] = {{cx + x, cy + y}, {cx - x, cy + y}, {cx + x, cy - y}, {cx - x, cy - y},
                            {cx + y, cy + x}, {cx - y, cy + x}, {cx + y, cy - x}, {cx - y, cy - x}};
    for (const auto& p : pts) {
      if (p[0] >= 0 && p[1] >= 0 && p[0] < img.width() && p[1] < img.height()) {
        img.set(static_cast<int>(p[0]), static_cast<int>(p[1]), color);
      }
    }
  };
  long x = r, y = 0, err = 1 - r;
  while (x >= y) {
    plot8(x, y);
    ++y;
    if (err < 0) {
      err += 2 * y + 1;
    } else {
      --x;
      err += 2 * (y - x) + 1;
    }
  }
}

}  // namespace

void draw_curve(Image& img, const GeneralizedCircle& curve, const Window& window, Rgb color) {
  const PixelFrame f{window.x_min(), window.y_max(), window.width / img.width(), window.height / img.height()};
  const double w = img.width(), h = img.height();
  const double diag = std::hypot(w, h);

  if (const auto* line = std::get_if<Line>(&curve)) {
    const double x = f.px(line->point), y = f.py(line->point);
    const double dx = line->direction.real() / f.pw, dy = -line->direction.imag() / f.ph;
    const double reach = std::hypot(x - 0.5 * w, y - 0.5 * h) + 2.0 * diag;
    const double speed = std::hypot(dx, dy);
    draw_clipped(img, x, y, dx, dy, -reach / speed, reach / speed, color);
    return;
  }

  const Circle& c = std::get<Circle>(curve);
  const double cx = f.px(c.center), cy = f.py(c.center);
  const double r = c.radius / f.pw;
  // skip circles whose stroke cannot touch the raster
  const double nx = std::clamp(cx, -1.0, w), ny = std::clamp(cy, -1.0, h);
  const double nearest = std::hypot(cx - nx, cy - ny);
  const double farthest = std::max({std::hypot(cx + 1.0, cy + 1.0), std::hypot(cx - w, cy + 1.0),
                                    std::hypot(cx + 1.0, cy - h), std::hypot(cx - w, cy - h)});
  if (nearest > r + 1.0 || farthest < r - 1.0) return;

  if (r < 1e6) {
    midpoint_circle(img, std::lround(cx), std::lround(cy), std::lround(r), color);
    return;
  }
  // Near-straight arc: only the stretch facing the raster can be visible.
  const double phi0 = std::atan2(0.5 * h - cy, 0.5 * w - cx);
  const double span = std::min(std::numbers::pi, 2.0 * diag / r);
  const int steps = static_cast<int>(8.0 * diag);
  double px = cx + r * std::cos(phi0 - span), py = cy + r * std::sin(phi0 - span);
  for (int k = 1; k <= steps; ++k) {
    const double phi = phi0 - span + 2.0 * span * k / steps;
    const double qx = cx + r * std::cos(phi), qy = cy + r * std::sin(phi);
    draw_clipped(img, px, py, qx - px, qy - py, 0.0, 1.0, color);
    px = qx;
    py = qy;
  }
}

Image overlay_net(Image img, const SteinerNet& net, const Window& window, Rgb color) {
  for (const GeneralizedCircle& m : net.meridians) draw_curve(img, m, window, color);
  for (const GeneralizedCircle& l : net.latitudes) draw_curve(img, l, window, color);
  return img;
}

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.reserve(out.size() + 3 * img.pixels().size());
  for (const Rgb& p : img.pixels()) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_ppm: cannot open " + path.string());
  const std::string bytes = encode_ppm(img);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  os.close();
  if (!os) throw std::runtime_error("write_ppm: write failed for " + path.string());
}

}  // namespace p2dyn
