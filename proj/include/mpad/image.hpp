#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mpad {

using Rgb = std::array<std::uint8_t, 3>;

/// 8-bit RGB image, row-major, three interleaved channels per pixel.
class RasterImage {
 public:
  /// Creates a width x height image filled with `fill`. Throws
  /// InvalidArgument when either side is < 1.
  RasterImage(int width, int height, std::array<std::uint8_t, 3> fill = {0, 0, 0});

  /// Adopts an existing buffer; its size must be width * height * 3.
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  std::uint8_t at(int x, int y, int channel) const noexcept {
    return pixels_[index(x, y) + static_cast<std::size_t>(channel)];
  }
  std::uint8_t& at(int x, int y, int channel) noexcept {
    return pixels_[index(x, y) + static_cast<std::size_t>(channel)];
  }

  std::array<std::uint8_t, 3> rgb(int x, int y) const noexcept {
    const auto i = index(x, y);
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }

  void set(int x, int y, std::array<std::uint8_t, 3> rgb) noexcept {
    const auto i = index(x, y);
    pixels_[i] = rgb[0];
    pixels_[i + 1] = rgb[1];
    pixels_[i + 2] = rgb[2];
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  bool operator==(const RasterImage&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Bilinear sample at a sub-pixel position (pixel centers on integer
/// coordinates). Neighbours outside the image contribute black.
std::array<double, 3> sample_bilinear(const RasterImage& image, double x, double y) noexcept;

/// Rounds and clamps a channel value into [0, 255].
std::uint8_t to_channel(double value) noexcept;

/// Binary PPM (P6, maxval 255).
RasterImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RasterImage& image, const std::filesystem::path& path);

/// Mean absolute channel difference, in 8-bit units. Sizes must agree.
double mean_abs_diff(const RasterImage& a, const RasterImage& b);

}  // namespace mpad
