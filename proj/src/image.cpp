#include "mpad/image.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>

#include "mpad/error.hpp"

namespace mpad {

RasterImage::RasterImage(int width, int height, std::array<std::uint8_t, 3> fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) throw InvalidArgument("image dimensions must be positive");
  pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill[0];
    pixels_[i + 1] = fill[1];
    pixels_[i + 2] = fill[2];
  }
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) throw InvalidArgument("image dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3)
    throw DimensionError("pixel buffer does not match " + std::to_string(width) + "x" +
                         std::to_string(height));
}

std::uint8_t to_channel(double value) noexcept {
  if (!(value > 0.0)) return 0;
  if (value >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::lround(value));
}

std::array<double, 3> sample_bilinear(const RasterImage& image, double x, double y) noexcept {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  if (!std::isfinite(fx) || !std::isfinite(fy)) return out;
  if (fx < -1.0 || fy < -1.0 || fx > image.width() || fy > image.height()) return out;
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  const double weights[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
  const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
  const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
  for (int k = 0; k < 4; ++k) {
    if (weights[k] == 0.0) continue;
    if (xs[k] < 0 || ys[k] < 0 || xs[k] >= image.width() || ys[k] >= image.height()) continue;
    for (int c = 0; c < 3; ++c) out[c] += weights[k] * image.at(xs[k], ys[k], c);
  }
  return out;
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  while (true) {
    const int ch = in.get();
    if (ch == EOF) return token;
    if (ch == '#' && token.empty()) {
      std::string ignored;
      std::getline(in, ignored);
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
}

int parse_header_int(const std::string& token, const std::filesystem::path& path) {
  char* end = nullptr;
  const long value = std::strtol(token.c_str(), &end, 10);
  if (token.empty() || *end != '\0' || value < 1 || value > (1 << 20))
    throw ParseError(path.string(), 0, "bad PPM header field '" + token + "'");
  return static_cast<int>(value);
}

}  // namespace

RasterImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  if (next_token(in) != "P6") throw ParseError(path.string(), 0, "not a binary PPM (P6)");
  const int width = parse_header_int(next_token(in), path);
  const int height = parse_header_int(next_token(in), path);
  const int maxval = parse_header_int(next_token(in), path);
  if (maxval != 255) throw ParseError(path.string(), 0, "only maxval 255 is supported");
  // next_token consumed exactly one whitespace byte after maxval
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(pixels.size()))
    throw ParseError(path.string(), 0, "truncated pixel data");
  return RasterImage(width, height, std::move(pixels));
}

void write_ppm(const RasterImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  const auto px = image.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

double mean_abs_diff(const RasterImage& a, const RasterImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw DimensionError("mean_abs_diff: image sizes differ");
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) sum += std::abs(int(pa[i]) - int(pb[i]));
  return sum / static_cast<double>(pa.size());
}

}  // namespace mpad
