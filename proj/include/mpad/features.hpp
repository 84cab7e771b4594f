#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mpad/embedding.hpp"
#include "mpad/geometry.hpp"
#include "mpad/image.hpp"
#include "mpad/landmarks.hpp"

namespace mpad {

/// Feature channels evaluated by the detector.
enum class Channel {
  embedding_diff,  // reference embedding minus probe embedding
  landmark_diff,   // normalized landmark differences
  lbp_grid,        // 4x4 grid LBP histograms of both images
  probe_only,      // probe embedding alone
};

std::string_view to_string(Channel channel) noexcept;
std::optional<Channel> parse_channel(std::string_view token) noexcept;

inline constexpr std::size_t kLbpGrid = 4;
inline constexpr std::size_t kLbpBins = 256;
inline constexpr std::size_t kLbpImageDim = kLbpGrid * kLbpGrid * kLbpBins;  // 4096
inline constexpr std::size_t kLandmarkDiffDim = 2 * kLandmarkCount;         // 136

/// Length a channel's feature vector must have.
std::size_t channel_dim(Channel channel, std::size_t embedding_dim) noexcept;

struct FeatureVector {
  Channel channel = Channel::embedding_diff;
  std::vector<double> values;

  std::size_t dim() const noexcept { return values.size(); }
};

/// ref - probe, element-wise. With `normalize`, each input is first scaled to
/// unit Euclidean norm (zero vectors are left as they are).
FeatureVector embedding_difference(const Embedding& reference, const Embedding& probe,
                                   bool normalize);

/// 68 x-differences followed by 68 y-differences of the eye-normalized sets.
FeatureVector landmark_difference(const LandmarkSet& reference, const LandmarkSet& probe);

/// Row-major 3x3 patch; index 4 is the center.
using Patch3x3 = std::array<std::uint8_t, 9>;

/// Bit b is set iff neighbour b >= center. Neighbours run clockwise from the
/// top-left: (-1,-1) (-1,0) (-1,1) (0,1) (1,1) (1,0) (1,-1) (0,-1) as (row, col).
std::uint8_t lbp_code(const Patch3x3& patch) noexcept;

/// Single-channel 8-bit image.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const noexcept {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

/// round(0.299 R + 0.587 G + 0.114 B), evaluated in exact integer arithmetic.
GrayImage to_grayscale(const RasterImage& image);

/// 16 per-cell 256-bin LBP histograms in row-major cell order. Each cell
/// excludes its own 1-pixel border. Throws DimensionError unless both sides
/// divide evenly into 4 cells of at least 3 pixels.
std::vector<double> lbp_histograms(const GrayImage& image);

/// Reference histograms followed by probe histograms (8192 values).
FeatureVector lbp_grid_features(const AlignedFace& reference, const AlignedFace& probe);

FeatureVector probe_only_feature(const Embedding& probe);

}  // namespace mpad
