#include "mpad/quality_gate.hpp"

#include <cmath>

#include "mpad/geometry.hpp"

namespace mpad {

QualityGateReport quality_gate(const LandmarkSet& landmarks, const QualityThresholds& thresholds) {
  QualityGateReport report;
  const double iod = inter_ocular_distance(landmarks);
  if (!(iod > 0.0)) return report;

  report.yaw_asymmetry =
      std::abs(distance(landmarks[33], landmarks[0]) - distance(landmarks[33], landmarks[16])) / iod;
  report.frontal_pose = report.yaw_asymmetry <= thresholds.max_yaw_asymmetry;

  const double gap = (distance(landmarks[61], landmarks[67]) + distance(landmarks[62], landmarks[66]) +
                      distance(landmarks[63], landmarks[65])) /
                     3.0;
  report.lip_gap = gap / iod;
  report.mouth_closed = report.lip_gap <= thresholds.max_lip_gap;

  report.landmark_sanity = true;
  for (const auto& p : normalize_landmarks(landmarks))
    if (std::abs(p.x) > thresholds.landmark_box || std::abs(p.y) > thresholds.landmark_box)
      report.landmark_sanity = false;
  return report;
}

}  // namespace mpad
