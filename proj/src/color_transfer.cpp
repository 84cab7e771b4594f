#include "mpad/color_transfer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "mpad/error.hpp"
#include "mpad/mesh.hpp"

namespace mpad {

std::vector<Point2> convex_hull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  std::vector<Point2> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && orient2d(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const auto& p = points[i];
    while (k >= lower && orient2d(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

namespace {

std::vector<Point2> hull_of(const LandmarkSet& lm, std::size_t first, std::size_t last) {
  return convex_hull({lm.points().begin() + first, lm.points().begin() + last + 1});
}

bool inside_convex(const std::vector<Point2>& hull, Point2 p) {
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i)
    if (orient2d(hull[i], hull[(i + 1) % hull.size()], p) < 0) return false;
  return true;
}

std::vector<Point2> dilate(std::vector<Point2> hull, double factor) {
  const Point2 c = centroid(hull);
  for (auto& p : hull) p = c + factor * (p - c);
  return hull;
}

// Reinhard-style decorrelated space: RGB -> LMS -> log -> l, alpha, beta.
constexpr std::array<std::array<double, 3>, 3> kRgbToLms{{{0.3811, 0.5783, 0.0402},
                                                          {0.1967, 0.7244, 0.0782},
                                                          {0.0241, 0.1288, 0.8444}}};

std::array<std::array<double, 3>, 3> invert3(const std::array<std::array<double, 3>, 3>& m) {
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  std::array<std::array<double, 3>, 3> inv{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      inv[r][c] = (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) / det;
    }
  return inv;
}

const auto kLmsToRgb = invert3(kRgbToLms);

std::array<double, 3> to_lab(const std::uint8_t* rgb) {
  std::array<double, 3> lms{};
  for (int r = 0; r < 3; ++r) {
    const double v = kRgbToLms[r][0] * rgb[0] + kRgbToLms[r][1] * rgb[1] + kRgbToLms[r][2] * rgb[2];
    lms[r] = std::log(v + 1.0);
  }
  return {(lms[0] + lms[1] + lms[2]) / std::sqrt(3.0), (lms[0] + lms[1] - 2 * lms[2]) / std::sqrt(6.0),
          (lms[0] - lms[1]) / std::sqrt(2.0)};
}

std::array<std::uint8_t, 3> from_lab(const std::array<double, 3>& lab) {
  const double a = lab[0] / std::sqrt(3.0), b = lab[1] / std::sqrt(6.0), c = lab[2] / std::sqrt(2.0);
  const std::array<double, 3> log_lms{a + b + c, a + b - c, a - 2 * b};
  std::array<double, 3> lms{};
  for (int i = 0; i < 3; ++i) lms[i] = std::exp(log_lms[i]) - 1.0;
  std::array<std::uint8_t, 3> rgb{};
  for (int r = 0; r < 3; ++r)
    rgb[r] = to_channel(kLmsToRgb[r][0] * lms[0] + kLmsToRgb[r][1] * lms[1] + kLmsToRgb[r][2] * lms[2]);
  return rgb;
}

struct ChannelMoments {
  std::array<double, 3> mean{};
  std::array<double, 3> stdev{};
};

ChannelMoments moments(std::span<const std::array<double, 3>> values) {
  ChannelMoments m;
  for (const auto& v : values)
    for (int c = 0; c < 3; ++c) m.mean[c] += v[c];
  for (int c = 0; c < 3; ++c) m.mean[c] /= static_cast<double>(values.size());
  for (const auto& v : values)
    for (int c = 0; c < 3; ++c) m.stdev[c] += (v[c] - m.mean[c]) * (v[c] - m.mean[c]);
  for (int c = 0; c < 3; ++c) m.stdev[c] = std::sqrt(m.stdev[c] / static_cast<double>(values.size()));
  return m;
}

constexpr std::array<FaceRegion, 4> kMakeupRegions{FaceRegion::lips, FaceRegion::left_eye,
                                                   FaceRegion::right_eye, FaceRegion::skin};

const char* region_name(FaceRegion r) {
  switch (r) {
    case FaceRegion::lips: return "lips";
    case FaceRegion::left_eye: return "left eye";
    case FaceRegion::right_eye: return "right eye";
    case FaceRegion::skin: return "skin";
    case FaceRegion::none: break;
  }
  return "none";
}

}  // namespace

std::vector<FaceRegion> face_region_map(const LandmarkSet& landmarks, int width, int height,
                                        const RegionOptions& options) {
  using namespace landmark_index;
  std::vector<Point2> face_points(landmarks.points().begin() + kJawFirst,
                                  landmarks.points().begin() + kBrowLast + 1);
  const auto face = convex_hull(std::move(face_points));
  const auto lips = hull_of(landmarks, kLipsFirst, kLipsLast);
  const auto left = dilate(hull_of(landmarks, kLeftEyeFirst, kLeftEyeLast), options.eye_dilation);
  const auto right = dilate(hull_of(landmarks, kRightEyeFirst, kRightEyeLast), options.eye_dilation);

  std::vector<FaceRegion> map(static_cast<std::size_t>(width) * height, FaceRegion::none);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Point2 p{double(x), double(y)};
      if (!inside_convex(face, p)) continue;
      auto& r = map[static_cast<std::size_t>(y) * width + x];
      if (inside_convex(lips, p)) r = FaceRegion::lips;
      else if (inside_convex(left, p)) r = FaceRegion::left_eye;
      else if (inside_convex(right, p)) r = FaceRegion::right_eye;
      else r = FaceRegion::skin;
    }
  }
  return map;
}

RasterImage makeup_color_transfer(const RasterImage& probe, const LandmarkSet& probe_lm,
                                  const RasterImage& target, const LandmarkSet& target_lm,
                                  const RegionOptions& options) {
  const auto probe_map = face_region_map(probe_lm, probe.width(), probe.height(), options);
  const auto target_map = face_region_map(target_lm, target.width(), target.height(), options);
  RasterImage out = probe;
  const auto probe_px = probe.pixels();
  const auto target_px = target.pixels();
  auto out_px = out.pixels();

  for (auto region : kMakeupRegions) {
    std::vector<std::array<double, 3>> probe_values, target_values;
    std::vector<std::size_t> probe_index;
    for (std::size_t i = 0; i < probe_map.size(); ++i)
      if (probe_map[i] == region) {
        probe_values.push_back(to_lab(&probe_px[3 * i]));
        probe_index.push_back(i);
      }
    for (std::size_t i = 0; i < target_map.size(); ++i)
      if (target_map[i] == region) target_values.push_back(to_lab(&target_px[3 * i]));
    if (probe_values.empty() || target_values.empty())
      throw GeometryError(std::string("empty ") + region_name(region) + " region");

    const auto src = moments(probe_values);
    const auto dst = moments(target_values);
    for (std::size_t k = 0; k < probe_values.size(); ++k) {
      std::array<double, 3> lab{};
      for (int c = 0; c < 3; ++c) {
        const double centered = probe_values[k][c] - src.mean[c];
        const double scale = src.stdev[c] > 0.0 ? dst.stdev[c] / src.stdev[c] : 1.0;
        lab[c] = centered * scale + dst.mean[c];
      }
      const auto rgb = from_lab(lab);
      const std::size_t i = probe_index[k];
      out_px[3 * i] = rgb[0];
      out_px[3 * i + 1] = rgb[1];
      out_px[3 * i + 2] = rgb[2];
    }
  }
  return out;
}

}  // namespace mpad
