#pragma once

#include "mpad/landmarks.hpp"

namespace mpad {

/// Landmark-geometry thresholds, all relative to the inter-ocular distance.
struct QualityThresholds {
  double max_yaw_asymmetry = 0.35;  // |d(33,0) - d(33,16)| / IOD
  double max_lip_gap = 0.10;        // mean inner-lip gap / IOD
  double landmark_box = 2.5;        // |normalized coordinate| bound
};

struct QualityGateReport {
  bool frontal_pose = false;
  double yaw_asymmetry = 0.0;
  bool mouth_closed = false;
  double lip_gap = 0.0;
  bool landmark_sanity = false;

  bool passed() const noexcept { return frontal_pose && mouth_closed && landmark_sanity; }
};

/// Never throws: coincident eye centers fail every gate.
QualityGateReport quality_gate(const LandmarkSet& landmarks, const QualityThresholds& thresholds = {});

}  // namespace mpad
