#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>

namespace mpad {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  bool operator==(const Point2&) const = default;
};

double distance(Point2 a, Point2 b) noexcept;

inline constexpr std::size_t kLandmarkCount = 68;

/// Index ranges of the 68-point annotation scheme, [first, last].
namespace landmark_index {
inline constexpr std::size_t kJawFirst = 0, kJawLast = 16;
inline constexpr std::size_t kBrowFirst = 17, kBrowLast = 26;
inline constexpr std::size_t kNoseFirst = 27, kNoseLast = 35;
inline constexpr std::size_t kNoseTip = 33;
inline constexpr std::size_t kLeftEyeFirst = 36, kLeftEyeLast = 41;
inline constexpr std::size_t kRightEyeFirst = 42, kRightEyeLast = 47;
inline constexpr std::size_t kLipsFirst = 48, kLipsLast = 67;
}  // namespace landmark_index

/// Exactly 68 finite facial landmark coordinates in pixel units.
class LandmarkSet {
 public:
  using Points = std::array<Point2, kLandmarkCount>;

  /// Throws InvalidArgument if any coordinate is not finite.
  explicit LandmarkSet(const Points& points);

  const Points& points() const noexcept { return points_; }
  const Point2& operator[](std::size_t i) const noexcept { return points_[i]; }

  bool operator==(const LandmarkSet&) const = default;

 private:
  Points points_;
};

Point2 centroid(std::span<const Point2> points);

/// 68 lines "x,y". Errors name the offending line.
LandmarkSet load_landmarks(const std::filesystem::path& path);
void save_landmarks(const LandmarkSet& landmarks, const std::filesystem::path& path);

}  // namespace mpad
