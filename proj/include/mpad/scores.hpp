#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mpad {

/// Detection scores use bona_fide/attack; comparison scores use
/// genuine/impostor/attack.
enum class ScoreClass { bona_fide, attack, genuine, impostor };

std::string_view to_string(ScoreClass c) noexcept;
std::optional<ScoreClass> parse_score_class(std::string_view token) noexcept;

struct ScoreEntry {
  std::string pair_id;
  ScoreClass label = ScoreClass::bona_fide;
  double score = 0.0;
};

/// Scores with ground-truth labels; every score is finite.
class LabeledScoreSet {
 public:
  LabeledScoreSet() = default;
  explicit LabeledScoreSet(std::vector<ScoreEntry> entries);

  void add(ScoreEntry entry);

  const std::vector<ScoreEntry>& entries() const noexcept { return entries_; }

  /// Scores carrying `label`, in insertion order.
  std::vector<double> scores_of(ScoreClass label) const;

  /// Every score regardless of label, in insertion order.
  std::vector<double> all_scores() const;

 private:
  std::vector<ScoreEntry> entries_;
};

inline constexpr std::string_view kScoreHeader = "pair_id,label,score";

LabeledScoreSet load_scores(const std::filesystem::path& path);
void save_scores(const LabeledScoreSet& scores, const std::filesystem::path& path);

}  // namespace mpad
