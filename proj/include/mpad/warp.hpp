#pragma once

#include "mpad/image.hpp"
#include "mpad/landmarks.hpp"
#include "mpad/mesh.hpp"

namespace mpad {

struct WarpResult {
  RasterImage image;
  LandmarkSet landmarks;  // landmark positions in the warped image
};

/// Landmarks moved `intensity` of the way from `probe` to `target`
/// (0 keeps the probe shape, 1 adopts the target shape).
LandmarkSet interpolate_landmarks(const LandmarkSet& probe, const LandmarkSet& target,
                                  double intensity);

/// Piecewise-affine map from probe-frame to target-frame positions, using the
/// target mesh topology for both vertex sets.
PiecewiseAffineMap probe_to_target_map(const LandmarkSet& probe_lm, const LandmarkSet& target_lm,
                                       int width, int height);

/// Warps `probe` so that its landmarks move onto `target_lm` (scaled by
/// `intensity`). Both landmark sets live in the frame of the probe image.
/// Backward mapping with bilinear sampling; output has the probe's size.
WarpResult warp_to_target(const RasterImage& probe, const LandmarkSet& probe_lm,
                          const LandmarkSet& target_lm, double intensity = 1.0);

}  // namespace mpad
