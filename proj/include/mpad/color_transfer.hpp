#pragma once

#include <cstdint>
#include <vector>

#include "mpad/image.hpp"
#include "mpad/landmarks.hpp"

namespace mpad {

/// Convex hull, counter-clockwise (in y-up terms), without collinear points.
std::vector<Point2> convex_hull(std::vector<Point2> points);

/// Makeup regions of a face. Masks are pairwise disjoint and contained in the
/// face hull (jaw plus eyebrows).
enum class FaceRegion : std::uint8_t { none = 0, skin, left_eye, right_eye, lips };

struct RegionOptions {
  double eye_dilation = 2.0;  // eye hulls scaled about their centroid
};

/// Per-pixel region labels, row-major, width * height entries.
std::vector<FaceRegion> face_region_map(const LandmarkSet& landmarks, int width, int height,
                                        const RegionOptions& options = {});

/// Region-wise color statistics transfer: inside each makeup region the
/// probe's per-channel mean and standard deviation (in a log-LMS l-alpha-beta
/// space) are matched to the target's. Pixels outside every region are
/// copied unchanged. Throws GeometryError if a region is empty in either face.
RasterImage makeup_color_transfer(const RasterImage& probe, const LandmarkSet& probe_lm,
                                  const RasterImage& target, const LandmarkSet& target_lm,
                                  const RegionOptions& options = {});

}  // namespace mpad
