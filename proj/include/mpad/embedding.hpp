#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace mpad {

inline constexpr std::size_t kDefaultEmbeddingDim = 512;

/// Face representation produced by an external recognition network.
class Embedding {
 public:
  /// Throws InvalidArgument on an empty vector or non-finite entries.
  explicit Embedding(std::vector<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const Embedding&) const = default;

 private:
  std::vector<double> values_;
};

/// One comma-separated line of decimals. Throws DimensionError if the parsed
/// length differs from `expected_dim`, ParseError on malformed content.
Embedding load_embedding(const std::filesystem::path& path, std::size_t expected_dim);
void save_embedding(const Embedding& embedding, const std::filesystem::path& path);

}  // namespace mpad
