#include "mpad/landmarks.hpp"

#include <cmath>
#include <string>

#include "mpad/error.hpp"
#include "mpad/text_format.hpp"

namespace mpad {

double distance(Point2 a, Point2 b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

LandmarkSet::LandmarkSet(const Points& points) : points_(points) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y))
      throw InvalidArgument("landmark " + std::to_string(i) + " is not finite");
  }
}

Point2 centroid(std::span<const Point2> points) {
  if (points.empty()) throw InvalidArgument("centroid of an empty point set");
  Point2 sum;
  for (const auto& p : points) sum = sum + p;
  return (1.0 / static_cast<double>(points.size())) * sum;
}

LandmarkSet load_landmarks(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  // tolerate trailing blank lines
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.size() != kLandmarkCount)
    throw ParseError(path.string(), 0,
                     "expected 68 landmark lines, found " + std::to_string(lines.size()));
  LandmarkSet::Points points;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 2) throw ParseError(path.string(), i + 1, "expected 'x,y'");
    const auto x = parse_real(fields[0]);
    const auto y = parse_real(fields[1]);
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y))
      throw ParseError(path.string(), i + 1, "non-numeric coordinate '" + lines[i] + "'");
    points[i] = {*x, *y};
  }
  return LandmarkSet(points);
}

void save_landmarks(const LandmarkSet& landmarks, const std::filesystem::path& path) {
  std::string text;
  for (const auto& p : landmarks.points()) {
    text += format_real(p.x);
    text += ',';
    text += format_real(p.y);
    text += '\n';
  }
  write_text(path, text);
}

}  // namespace mpad
