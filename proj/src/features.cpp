#include "mpad/features.hpp"

#include <cmath>
#include <numeric>

#include "mpad/error.hpp"

namespace mpad {

std::string_view to_string(Channel channel) noexcept {
  switch (channel) {
    case Channel::embedding_diff: return "embedding_diff";
    case Channel::landmark_diff: return "landmark_diff";
    case Channel::lbp_grid: return "lbp_grid";
    case Channel::probe_only: return "probe_only";
  }
  return "unknown";
}

std::optional<Channel> parse_channel(std::string_view token) noexcept {
  for (auto c : {Channel::embedding_diff, Channel::landmark_diff, Channel::lbp_grid,
                 Channel::probe_only})
    if (token == to_string(c)) return c;
  return std::nullopt;
}

std::size_t channel_dim(Channel channel, std::size_t embedding_dim) noexcept {
  switch (channel) {
    case Channel::embedding_diff:
    case Channel::probe_only: return embedding_dim;
    case Channel::landmark_diff: return kLandmarkDiffDim;
    case Channel::lbp_grid: return 2 * kLbpImageDim;
  }
  return 0;
}

namespace {

std::vector<double> unit_scaled(std::span<const double> v, bool normalize) {
  std::vector<double> out(v.begin(), v.end());
  if (!normalize) return out;
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  if (norm > 0.0)
    for (double& x : out) x /= norm;
  return out;
}

}  // namespace

FeatureVector embedding_difference(const Embedding& reference, const Embedding& probe,
                                   bool normalize) {
  if (reference.dim() != probe.dim())
    throw DimensionError("embedding dimensions differ: " + std::to_string(reference.dim()) +
                         " vs " + std::to_string(probe.dim()));
  const auto ref = unit_scaled(reference.values(), normalize);
  const auto prb = unit_scaled(probe.values(), normalize);
  FeatureVector f{Channel::embedding_diff, std::vector<double>(ref.size())};
  for (std::size_t i = 0; i < ref.size(); ++i) f.values[i] = ref[i] - prb[i];
  return f;
}

FeatureVector landmark_difference(const LandmarkSet& reference, const LandmarkSet& probe) {
  const auto ref = normalize_landmarks(reference);
  const auto prb = normalize_landmarks(probe);
  FeatureVector f{Channel::landmark_diff, std::vector<double>(kLandmarkDiffDim)};
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    f.values[i] = ref[i].x - prb[i].x;
    f.values[kLandmarkCount + i] = ref[i].y - prb[i].y;
  }
  return f;
}

std::uint8_t lbp_code(const Patch3x3& patch) noexcept {
  // patch indices of the neighbours in bit order
  constexpr std::array<int, 8> order{0, 1, 2, 5, 8, 7, 6, 3};
  const auto center = patch[4];
  std::uint8_t code = 0;
  for (int bit = 0; bit < 8; ++bit)
    if (patch[order[bit]] >= center) code |= static_cast<std::uint8_t>(1u << bit);
  return code;
}

GrayImage to_grayscale(const RasterImage& image) {
  GrayImage gray{image.width(), image.height(), {}};
  gray.pixels.resize(static_cast<std::size_t>(image.width()) * image.height());
  const auto px = image.pixels();
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    const unsigned weighted = 299u * px[3 * i] + 587u * px[3 * i + 1] + 114u * px[3 * i + 2];
    gray.pixels[i] = static_cast<std::uint8_t>((weighted + 500u) / 1000u);
  }
  return gray;
}

std::vector<double> lbp_histograms(const GrayImage& image) {
  const int grid = static_cast<int>(kLbpGrid);
  if (image.width % grid != 0 || image.height % grid != 0)
    throw DimensionError("image " + std::to_string(image.width) + "x" +
                         std::to_string(image.height) + " does not divide into a 4x4 grid");
  const int cell_w = image.width / grid;
  const int cell_h = image.height / grid;
  if (cell_w < 3 || cell_h < 3) throw DimensionError("LBP cells must be at least 3x3 pixels");

  std::vector<double> hist(kLbpImageDim, 0.0);
  for (int cy = 0; cy < grid; ++cy) {
    for (int cx = 0; cx < grid; ++cx) {
      double* cell_hist = hist.data() + (static_cast<std::size_t>(cy) * grid + cx) * kLbpBins;
      const int x0 = cx * cell_w;
      const int y0 = cy * cell_h;
      for (int y = y0 + 1; y < y0 + cell_h - 1; ++y) {
        for (int x = x0 + 1; x < x0 + cell_w - 1; ++x) {
          Patch3x3 patch;
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) patch[(dy + 1) * 3 + dx + 1] = image.at(x + dx, y + dy);
          cell_hist[lbp_code(patch)] += 1.0;
        }
      }
    }
  }
  return hist;
}

FeatureVector lbp_grid_features(const AlignedFace& reference, const AlignedFace& probe) {
  if (reference.image.width() != probe.image.width() ||
      reference.image.height() != probe.image.height())
    throw DimensionError("reference and probe crops differ in size");
  FeatureVector f{Channel::lbp_grid, lbp_histograms(to_grayscale(reference.image))};
  const auto probe_hist = lbp_histograms(to_grayscale(probe.image));
  f.values.insert(f.values.end(), probe_hist.begin(), probe_hist.end());
  return f;
}

FeatureVector probe_only_feature(const Embedding& probe) {
  return {Channel::probe_only, std::vector<double>(probe.values().begin(), probe.values().end())};
}

}  // namespace mpad
