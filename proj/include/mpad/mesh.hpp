#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "mpad/landmarks.hpp"

namespace mpad {

struct TriangleMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise in y-up terms
};

/// Twice the signed area of (a, b, c).
double orient2d(Point2 a, Point2 b, Point2 c) noexcept;

/// > 0 when d lies strictly inside the circumcircle of counter-clockwise (a, b, c).
double in_circle(Point2 a, Point2 b, Point2 c, Point2 d) noexcept;

/// Delaunay triangulation of the rectangle [0, width] x [0, height] with its
/// four corners plus `points` as vertices (corners first, then `points` in
/// order). Points may lie on the rectangle border. Throws GeometryError for
/// points outside the rectangle, duplicates, or an empty rectangle.
TriangleMesh delaunay_in_rectangle(std::span<const Point2> points, double width, double height);

/// Index of the first fixed boundary vertex in a face mesh.
inline constexpr int kBoundaryVertexOffset = static_cast<int>(kLandmarkCount);

/// The 8 fixed boundary vertices of a W x H crop: 4 corners, then 4 edge
/// midpoints, on the pixel-center extent [0, W-1] x [0, H-1].
std::array<Point2, 8> crop_boundary_points(int width, int height);

/// Landmarks clamped into the crop.
LandmarkSet::Points clamp_to_crop(const LandmarkSet& landmarks, int width, int height);

/// Delaunay mesh over the 68 clamped landmarks (vertices 0-67) and the 8
/// boundary points (vertices 68-75).
TriangleMesh delaunay_mesh(const LandmarkSet& landmarks, int width, int height);

/// Piecewise-affine map defined by a mesh and a second set of vertex positions
/// sharing its topology.
class PiecewiseAffineMap {
 public:
  /// Throws GeometryError when either mesh has a triangle with |area| <= 1e-9.
  PiecewiseAffineMap(TriangleMesh from, std::vector<Point2> to_vertices);

  /// Image of `p`, or nullopt when no triangle of the source mesh contains it.
  std::optional<Point2> operator()(Point2 p) const;

  const TriangleMesh& mesh() const noexcept { return from_; }
  const std::vector<Point2>& to_vertices() const noexcept { return to_; }

 private:
  TriangleMesh from_;
  std::vector<Point2> to_;
};

}  // namespace mpad
