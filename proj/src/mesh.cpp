#include "mpad/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "mpad/error.hpp"

namespace mpad {

double orient2d(Point2 a, Point2 b, Point2 c) noexcept {
  const long double acx = (long double)a.x - c.x, bcx = (long double)b.x - c.x;
  const long double acy = (long double)a.y - c.y, bcy = (long double)b.y - c.y;
  return static_cast<double>(acx * bcy - acy * bcx);
}

double in_circle(Point2 a, Point2 b, Point2 c, Point2 d) noexcept {
  const long double adx = (long double)a.x - d.x, ady = (long double)a.y - d.y;
  const long double bdx = (long double)b.x - d.x, bdy = (long double)b.y - d.y;
  const long double cdx = (long double)c.x - d.x, cdy = (long double)c.y - d.y;
  const long double ad = adx * adx + ady * ady;
  const long double bd = bdx * bdx + bdy * bdy;
  const long double cd = cdx * cdx + cdy * cdy;
  return static_cast<double>(adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
                             ad * (bdx * cdy - bdy * cdx));
}

namespace {

constexpr double kAreaEpsilon = 1e-9;

using Triangle = std::array<int, 3>;

bool on_border(Point2 a, Point2 b, double width, double height) {
  return (a.x == 0.0 && b.x == 0.0) || (a.x == width && b.x == width) || (a.y == 0.0 && b.y == 0.0) ||
         (a.y == height && b.y == height);
}

}  // namespace

TriangleMesh delaunay_in_rectangle(std::span<const Point2> points, double width, double height) {
  if (!(width > 0.0) || !(height > 0.0)) throw GeometryError("triangulation rectangle is empty");
  TriangleMesh mesh;
  mesh.vertices = {{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}};
  for (const auto& p : points) {
    if (!(p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height))
      throw GeometryError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") lies outside the triangulation rectangle");
    mesh.vertices.push_back(p);
  }
  {
    auto sorted = mesh.vertices;
    std::sort(sorted.begin(), sorted.end(),
              [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] == sorted[i - 1])
        throw GeometryError("duplicate vertex (" + std::to_string(sorted[i].x) + ", " +
                            std::to_string(sorted[i].y) + ")");
  }

  auto& tris = mesh.triangles;
  tris = {{0, 1, 2}, {0, 2, 3}};
  const auto& v = mesh.vertices;
  for (int p = 4; p < static_cast<int>(v.size()); ++p) {
    const Point2 pt = v[p];
    std::vector<Triangle> kept;
    // directed cavity edges; an edge shared by two bad triangles cancels out
    std::map<std::pair<int, int>, int> edges;
    for (const auto& t : tris) {
      if (in_circle(v[t[0]], v[t[1]], v[t[2]], pt) > 0.0) {
        for (int e = 0; e < 3; ++e) edges[{t[e], t[(e + 1) % 3]}] += 1;
      } else {
        kept.push_back(t);
      }
    }
    if (edges.empty()) throw GeometryError("point insertion found no cavity");
    for (const auto& [edge, n] : edges) {
      if (edges.count({edge.second, edge.first})) continue;
      const double o = orient2d(v[edge.first], v[edge.second], pt);
      if (std::abs(o) <= kAreaEpsilon) {
        if (on_border(v[edge.first], v[edge.second], width, height)) continue;  // pt splits it
        throw GeometryError("degenerate triangle in mesh (collinear vertices)");
      }
      if (o < 0.0) throw GeometryError("triangulation failed: non-star-shaped cavity");
      kept.push_back({edge.first, edge.second, p});
    }
    tris = std::move(kept);
  }
  for (const auto& t : tris)
    if (std::abs(orient2d(v[t[0]], v[t[1]], v[t[2]])) <= kAreaEpsilon)
      throw GeometryError("degenerate triangle in mesh");
  return mesh;
}

std::array<Point2, 8> crop_boundary_points(int width, int height) {
  const double w = width - 1.0;
  const double h = height - 1.0;
  return {{{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h},
           {w / 2, 0.0}, {w, h / 2}, {w / 2, h}, {0.0, h / 2}}};
}

LandmarkSet::Points clamp_to_crop(const LandmarkSet& landmarks, int width, int height) {
  LandmarkSet::Points out = landmarks.points();
  for (auto& p : out) {
    p.x = std::clamp(p.x, 0.0, width - 1.0);
    p.y = std::clamp(p.y, 0.0, height - 1.0);
  }
  return out;
}

TriangleMesh delaunay_mesh(const LandmarkSet& landmarks, int width, int height) {
  if (width < 2 || height < 2) throw GeometryError("crop must be at least 2x2");
  const auto boundary = crop_boundary_points(width, height);
  std::vector<Point2> interior(boundary.begin() + 4, boundary.end());
  const auto clamped = clamp_to_crop(landmarks, width, height);
  interior.insert(interior.end(), clamped.begin(), clamped.end());
  auto raw = delaunay_in_rectangle(interior, width - 1.0, height - 1.0);

  // reorder: landmarks 0-67, corners 68-71, midpoints 72-75
  std::vector<int> remap(raw.vertices.size());
  for (int i = 0; i < 4; ++i) remap[i] = kBoundaryVertexOffset + i;
  for (int i = 0; i < 4; ++i) remap[4 + i] = kBoundaryVertexOffset + 4 + i;
  for (int i = 0; i < static_cast<int>(kLandmarkCount); ++i) remap[8 + i] = i;
  TriangleMesh mesh;
  mesh.vertices.resize(raw.vertices.size());
  for (std::size_t i = 0; i < raw.vertices.size(); ++i) mesh.vertices[remap[i]] = raw.vertices[i];
  for (const auto& t : raw.triangles) mesh.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  return mesh;
}

PiecewiseAffineMap::PiecewiseAffineMap(TriangleMesh from, std::vector<Point2> to_vertices)
    : from_(std::move(from)), to_(std::move(to_vertices)) {
  if (to_.size() != from_.vertices.size())
    throw DimensionError("piecewise map: vertex counts differ");
  for (const auto& t : from_.triangles) {
    if (std::abs(orient2d(from_.vertices[t[0]], from_.vertices[t[1]], from_.vertices[t[2]])) <=
            kAreaEpsilon ||
        std::abs(orient2d(to_[t[0]], to_[t[1]], to_[t[2]])) <= kAreaEpsilon)
      throw GeometryError("degenerate triangle in warp mesh");
  }
}

std::optional<Point2> PiecewiseAffineMap::operator()(Point2 p) const {
  constexpr double kInsideTolerance = -1e-9;
  for (const auto& t : from_.triangles) {
    const Point2 a = from_.vertices[t[0]], b = from_.vertices[t[1]], c = from_.vertices[t[2]];
    const double area = orient2d(a, b, c);
    const double wa = orient2d(b, c, p) / area;
    const double wb = orient2d(c, a, p) / area;
    const double wc = 1.0 - wa - wb;
    if (wa >= kInsideTolerance && wb >= kInsideTolerance && wc >= kInsideTolerance)
      return wa * to_[t[0]] + wb * to_[t[1]] + wc * to_[t[2]];
  }
  return std::nullopt;
}

}  // namespace mpad
