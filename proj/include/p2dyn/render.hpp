#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "p2dyn/iteration.hpp"
#include "p2dyn/steiner.hpp"

namespace p2dyn {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster, row-major with the top row first.
class Image {
 public:
  Image(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<Rgb>& pixels() const { return pixels_; }

  const Rgb& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  /// Writes are clipped to the raster.
  void set(int x, int y, Rgb c);

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

struct Palette {
  Rgb zero_hue{0, 160, 0};
  Rgb infinity_hue{0, 64, 208};
  Rgb undecided{0, 0, 0};
};

inline constexpr Rgb kOverlayColor{255, 220, 64};
inline constexpr Rgb kNeutralBackground{48, 48, 48};

/// Decided cells get their hue scaled by clamp(255 * 0.97^t, 32, 255) / 255.
Image render_basin(const BasinField& field, const Palette& palette = {});

/// Draws every meridian and latitude with a 1-pixel stroke. `window` must be
/// the window the image was rendered from.
Image overlay_net(Image img, const SteinerNet& net, const Window& window, Rgb color = kOverlayColor);

/// Draws one generalized circle: midpoint algorithm for circles, Bresenham for lines.
void draw_curve(Image& img, const GeneralizedCircle& curve, const Window& window, Rgb color);

/// Binary P6 encoding: "P6\n{w} {h}\n255\n" followed by 3 w h bytes.
std::string encode_ppm(const Image& img);

/// Throws std::runtime_error when the file cannot be written.
void write_ppm(const Image& img, const std::filesystem::path& path);

}  // namespace p2dyn
