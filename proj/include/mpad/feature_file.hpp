#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mpad/features.hpp"
#include "mpad/manifest.hpp"

namespace mpad {

struct FeatureRow {
  std::string pair_id;
  Label label = Label::bona_fide;
  Split split = Split::train;
  std::vector<double> values;
};

/// Extracted features of one channel, in manifest order.
struct FeatureTable {
  Channel channel = Channel::embedding_diff;
  std::size_t dim = 0;
  std::vector<FeatureRow> rows;
};

// Layout:
//   # mpad-features
//   # channel=<channel>
//   # dim=<n>
//   pair_id,label,split,f0,...,f<n-1>
//   <one row per pair>
void save_features(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable load_features(const std::filesystem::path& path);

}  // namespace mpad
