#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "mpad/features.hpp"
#include "mpad/geometry.hpp"
#include "mpad/quality_gate.hpp"
#include "mpad/svm.hpp"

namespace mpad {

struct PipelineConfig {
  Channel channel = Channel::embedding_diff;
  std::size_t embedding_dim = kDefaultEmbeddingDim;
  bool normalize_embeddings = true;
  double svm_c = 1.0;
  GammaSetting gamma = GammaSetting::scale();
  int crop_width = 224;
  int crop_height = 224;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double warp_intensity = 1.0;
  QualityThresholds gates;

  AlignmentConfig alignment() const { return {crop_width, crop_height, {0.35, 0.40}, {0.65, 0.40}}; }
};

/// Applies one `key=value` setting. Throws InvalidArgument for unknown keys
/// and out-of-range values.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value);

/// Flat key=value file; '#' starts a comment line. Errors carry line numbers.
PipelineConfig load_config(const std::filesystem::path& path);

/// Checks cross-field constraints (e.g. crop divisible into LBP cells).
void validate(const PipelineConfig& config);

}  // namespace mpad
