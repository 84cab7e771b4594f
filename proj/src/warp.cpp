#include "mpad/warp.hpp"

#include <algorithm>
#include <cmath>

#include "mpad/error.hpp"

namespace mpad {

namespace {

std::vector<Point2> mesh_vertices(const LandmarkSet& landmarks, int width, int height) {
  const auto clamped = clamp_to_crop(landmarks, width, height);
  std::vector<Point2> v(clamped.begin(), clamped.end());
  const auto boundary = crop_boundary_points(width, height);
  v.insert(v.end(), boundary.begin(), boundary.end());
  return v;
}

}  // namespace

LandmarkSet interpolate_landmarks(const LandmarkSet& probe, const LandmarkSet& target,
                                  double intensity) {
  if (!(intensity >= 0.0 && intensity <= 1.0))
    throw InvalidArgument("warp intensity must lie in [0, 1]");
  LandmarkSet::Points pts;
  for (std::size_t i = 0; i < kLandmarkCount; ++i)
    pts[i] = intensity == 1.0 ? target[i] : probe[i] + intensity * (target[i] - probe[i]);
  return LandmarkSet(pts);
}

PiecewiseAffineMap probe_to_target_map(const LandmarkSet& probe_lm, const LandmarkSet& target_lm,
                                       int width, int height) {
  auto mesh = delaunay_mesh(target_lm, width, height);
  mesh.vertices = mesh_vertices(probe_lm, width, height);
  return PiecewiseAffineMap(std::move(mesh), mesh_vertices(target_lm, width, height));
}

WarpResult warp_to_target(const RasterImage& probe, const LandmarkSet& probe_lm,
                          const LandmarkSet& target_lm, double intensity) {
  const int w = probe.width();
  const int h = probe.height();
  const auto goal = interpolate_landmarks(probe_lm, target_lm, intensity);
  // backward map: output (goal frame) -> probe frame
  const PiecewiseAffineMap backward(delaunay_mesh(goal, w, h), mesh_vertices(probe_lm, w, h));
  const auto& mesh = backward.mesh();
  const auto& src = backward.to_vertices();

  RasterImage out = probe;
  std::vector<char> done(static_cast<std::size_t>(w) * h, 0);
  constexpr double kInside = -1e-9;
  for (const auto& t : mesh.triangles) {
    const Point2 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
    const double area = orient2d(a, b, c);
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a.x, b.x, c.x}))));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max({a.x, b.x, c.x}))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a.y, b.y, c.y}))));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max({a.y, b.y, c.y}))));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        auto& flag = done[static_cast<std::size_t>(y) * w + x];
        if (flag) continue;
        const Point2 p{double(x), double(y)};
        const double wa = orient2d(b, c, p) / area;
        const double wb = orient2d(c, a, p) / area;
        const double wc = 1.0 - wa - wb;
        if (wa < kInside || wb < kInside || wc < kInside) continue;
        const Point2 s = wa * src[t[0]] + wb * src[t[1]] + wc * src[t[2]];
        const auto rgb = sample_bilinear(probe, s.x, s.y);
        out.set(x, y, {to_channel(rgb[0]), to_channel(rgb[1]), to_channel(rgb[2])});
        flag = 1;
      }
    }
  }
  return {std::move(out), LandmarkSet(clamp_to_crop(goal, w, h))};
}

}  // namespace mpad
