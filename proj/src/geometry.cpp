#include "mpad/geometry.hpp"

#include <cmath>
#include <span>

#include "mpad/error.hpp"

namespace mpad {

Affine2 Affine2::inverse() const {
  const double det = determinant();
  if (det == 0.0 || !std::isfinite(det)) throw GeometryError("affine map is singular");
  Affine2 inv;
  inv.a = d / det;
  inv.b = -b / det;
  inv.c = -c / det;
  inv.d = a / det;
  inv.tx = -(inv.a * tx + inv.b * ty);
  inv.ty = -(inv.c * tx + inv.d * ty);
  return inv;
}

Affine2 similarity_from_pairs(Point2 from_a, Point2 to_a, Point2 from_b, Point2 to_b) {
  const Point2 src = from_b - from_a;
  const Point2 dst = to_b - to_a;
  const double norm2 = src.x * src.x + src.y * src.y;
  if (norm2 == 0.0) throw GeometryError("coincident eye centers");
  // complex quotient dst / src = (re, im)
  const double re = (dst.x * src.x + dst.y * src.y) / norm2;
  const double im = (dst.y * src.x - dst.x * src.y) / norm2;
  Affine2 t;
  t.a = re;
  t.b = -im;
  t.c = im;
  t.d = re;
  t.tx = to_a.x - (t.a * from_a.x + t.b * from_a.y);
  t.ty = to_a.y - (t.c * from_a.x + t.d * from_a.y);
  return t;
}

EyeCenters eye_centers(const LandmarkSet& landmarks) {
  using namespace landmark_index;
  const auto& pts = landmarks.points();
  const std::span<const Point2> all(pts);
  return {centroid(all.subspan(kLeftEyeFirst, kLeftEyeLast - kLeftEyeFirst + 1)),
          centroid(all.subspan(kRightEyeFirst, kRightEyeLast - kRightEyeFirst + 1))};
}

double inter_ocular_distance(const LandmarkSet& landmarks) {
  const auto eyes = eye_centers(landmarks);
  return distance(eyes.left, eyes.right);
}

Affine2 alignment_transform(const LandmarkSet& landmarks, const AlignmentConfig& config) {
  if (config.width < 1 || config.height < 1)
    throw InvalidArgument("canonical crop must be at least 1x1");
  const auto eyes = eye_centers(landmarks);
  const Point2 left_target{config.left_eye_anchor.x * config.width,
                           config.left_eye_anchor.y * config.height};
  const Point2 right_target{config.right_eye_anchor.x * config.width,
                            config.right_eye_anchor.y * config.height};
  return similarity_from_pairs(eyes.left, left_target, eyes.right, right_target);
}

AlignedFace align_face(const RasterImage& image, const LandmarkSet& landmarks,
                       const AlignmentConfig& config) {
  const Affine2 forward = alignment_transform(landmarks, config);
  const Affine2 backward = forward.inverse();
  RasterImage out(config.width, config.height);
  for (int y = 0; y < config.height; ++y) {
    for (int x = 0; x < config.width; ++x) {
      const Point2 src = backward.apply({double(x), double(y)});
      const auto rgb = sample_bilinear(image, src.x, src.y);
      out.set(x, y, {to_channel(rgb[0]), to_channel(rgb[1]), to_channel(rgb[2])});
    }
  }
  return {std::move(out), forward};
}

LandmarkSet transform_landmarks(const LandmarkSet& landmarks, const Affine2& transform) {
  LandmarkSet::Points pts;
  for (std::size_t i = 0; i < kLandmarkCount; ++i) pts[i] = transform.apply(landmarks[i]);
  return LandmarkSet(pts);
}

LandmarkSet::Points normalize_landmarks(const LandmarkSet& landmarks) {
  const auto eyes = eye_centers(landmarks);
  const Point2 mid = 0.5 * (eyes.left + eyes.right);
  const Point2 axis = eyes.right - eyes.left;
  const double iod = std::hypot(axis.x, axis.y);
  if (iod == 0.0) throw GeometryError("coincident eye centers");
  const double cos_t = axis.x / iod;
  const double sin_t = axis.y / iod;
  LandmarkSet::Points out;
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    const Point2 p = landmarks[i] - mid;
    out[i] = {(cos_t * p.x + sin_t * p.y) / iod, (-sin_t * p.x + cos_t * p.y) / iod};
  }
  return out;
}

}  // namespace mpad
