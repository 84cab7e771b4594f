#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mpad/color_transfer.hpp"
#include "mpad/geometry.hpp"
#include "mpad/manifest.hpp"
#include "mpad/quality_gate.hpp"

namespace mpad {

/// One image of a subject in a synthesis pool. Paths are absolute.
struct PoolEntry {
  std::string subject_id;
  std::filesystem::path image;
  std::filesystem::path landmarks;
  std::optional<std::filesystem::path> embedding;
};

inline constexpr std::string_view kPoolHeader = "subject_id,image,landmarks,embedding";

/// CSV with kPoolHeader; relative paths resolve against the pool file's directory.
std::vector<PoolEntry> load_pool(const std::filesystem::path& path);

/// Uniform integer in [0, n) from raw generator output (rejection sampling),
/// identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

struct CrossPair {
  std::size_t target = 0;
  std::size_t probe = 0;

  bool operator==(const CrossPair&) const = default;
};

struct PairingPlan {
  std::vector<CrossPair> pairs;
  std::size_t available = 0;  // distinct cross-subject pairs
  bool with_replacement = false;
};

/// Draws `count` (target, probe) index pairs whose subjects differ. Pairs are
/// distinct while `count` does not exceed the available pairs; beyond that
/// they are drawn with replacement. Throws InvalidArgument when no valid pair
/// exists.
PairingPlan plan_attack_pairs(std::span<const std::string> target_subjects,
                              std::span<const std::string> probe_subjects, std::size_t count,
                              std::uint64_t seed);

/// Same-subject pairs: the first image of each subject against each later one.
std::vector<CrossPair> plan_bona_fide_pairs(std::span<const std::string> probe_subjects);

struct SynthesisConfig {
  AlignmentConfig crop;
  QualityThresholds gates;
  RegionOptions regions;
  double warp_intensity = 1.0;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  Split split = Split::train;
};

struct SyntheticAttack {
  RasterImage image;      // canonical crop
  LandmarkSet landmarks;  // landmark positions in `image`
};

/// Aligns both faces, warps the probe onto the target's shape, then transfers
/// the target's regional colors.
SyntheticAttack synthesize_attack(const RasterImage& probe_image, const LandmarkSet& probe_lm,
                                  const RasterImage& target_image, const LandmarkSet& target_lm,
                                  const SynthesisConfig& config);

struct GateCounts {
  std::size_t examined = 0;
  std::size_t passed = 0;
  std::size_t rejected_frontal = 0;
  std::size_t rejected_mouth = 0;
  std::size_t rejected_sanity = 0;
  std::size_t rejected_geometry = 0;  // unreadable or degenerate landmarks
};

struct CorpusSummary {
  GateCounts targets;
  GateCounts probes;
  std::size_t attacks = 0;
  std::size_t bona_fide = 0;
  bool with_replacement = false;
  std::vector<PairRecord> records;
};

inline constexpr std::string_view kAttackSourcesHeader =
    "pair_id,target_subject,probe_subject,target_image,probe_image";

/// Quality-gates both pools, synthesizes `config.count` attacks and writes
/// images/, landmarks/, manifest.csv and attack_sources.csv (which pool
/// entries each attack came from) under `out_dir`. The result depends
/// only on the pool contents, the seed and the count.
CorpusSummary generate_corpus(std::span<const PoolEntry> targets, std::span<const PoolEntry> probes,
                              const std::filesystem::path& out_dir, const SynthesisConfig& config);

}  // namespace mpad
