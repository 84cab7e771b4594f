#pragma once

#include <array>

#include "mpad/image.hpp"
#include "mpad/landmarks.hpp"

namespace mpad {

/// 2x3 affine map: (x, y) -> (a*x + b*y + tx, c*x + d*y + ty).
struct Affine2 {
  double a = 1.0, b = 0.0, tx = 0.0;
  double c = 0.0, d = 1.0, ty = 0.0;

  Point2 apply(Point2 p) const noexcept { return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; }
  double determinant() const noexcept { return a * d - b * c; }
  /// Throws GeometryError when the linear part is singular.
  Affine2 inverse() const;
};

/// Similarity (rotation, uniform scale, translation) taking `from_a` to `to_a`
/// and `from_b` to `to_b`. Throws GeometryError if `from_a == from_b`.
Affine2 similarity_from_pairs(Point2 from_a, Point2 to_a, Point2 from_b, Point2 to_b);

struct EyeCenters {
  Point2 left;   // centroid of landmarks 36-41
  Point2 right;  // centroid of landmarks 42-47
};

EyeCenters eye_centers(const LandmarkSet& landmarks);

/// Canonical crop geometry. Eye anchors are fractions of width and height.
struct AlignmentConfig {
  int width = 224;
  int height = 224;
  Point2 left_eye_anchor{0.35, 0.40};
  Point2 right_eye_anchor{0.65, 0.40};
};

struct AlignedFace {
  RasterImage image;
  Affine2 transform;  // source pixel -> canonical pixel
};

/// Resamples `image` (bilinear, black outside) so that the eye centers land on
/// the configured anchors. Throws GeometryError for coincident eye centers.
AlignedFace align_face(const RasterImage& image, const LandmarkSet& landmarks,
                       const AlignmentConfig& config = {});

/// The similarity used by align_face, without resampling.
Affine2 alignment_transform(const LandmarkSet& landmarks, const AlignmentConfig& config = {});

LandmarkSet transform_landmarks(const LandmarkSet& landmarks, const Affine2& transform);

/// Eye midpoint at the origin, eye line horizontal, inter-ocular distance 1.
/// Throws GeometryError for coincident eye centers.
LandmarkSet::Points normalize_landmarks(const LandmarkSet& landmarks);

double inter_ocular_distance(const LandmarkSet& landmarks);

}  // namespace mpad
