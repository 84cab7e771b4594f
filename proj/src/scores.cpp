#include "mpad/scores.hpp"

#include <cmath>

#include "mpad/error.hpp"
#include "mpad/text_format.hpp"

namespace mpad {

std::string_view to_string(ScoreClass c) noexcept {
  switch (c) {
    case ScoreClass::bona_fide: return "bona_fide";
    case ScoreClass::attack: return "attack";
    case ScoreClass::genuine: return "genuine";
    case ScoreClass::impostor: return "impostor";
  }
  return "unknown";
}

std::optional<ScoreClass> parse_score_class(std::string_view token) noexcept {
  token = trim(token);
  if (token == "bona_fide") return ScoreClass::bona_fide;
  if (token == "attack") return ScoreClass::attack;
  if (token == "genuine") return ScoreClass::genuine;
  if (token == "impostor") return ScoreClass::impostor;
  return std::nullopt;
}

LabeledScoreSet::LabeledScoreSet(std::vector<ScoreEntry> entries) {
  entries_.reserve(entries.size());
  for (auto& e : entries) add(std::move(e));
}

void LabeledScoreSet::add(ScoreEntry entry) {
  if (!std::isfinite(entry.score))
    throw InvalidArgument("score for '" + entry.pair_id + "' is not finite");
  entries_.push_back(std::move(entry));
}

std::vector<double> LabeledScoreSet::scores_of(ScoreClass label) const {
  std::vector<double> out;
  for (const auto& e : entries_)
    if (e.label == label) out.push_back(e.score);
  return out;
}

std::vector<double> LabeledScoreSet::all_scores() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.score);
  return out;
}

LabeledScoreSet load_scores(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  LabeledScoreSet set;
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (trim(line).empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (trim(line) != kScoreHeader) throw ParseError(path.string(), i + 1, "unexpected header");
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 3) throw ParseError(path.string(), i + 1, "expected 3 columns");
    const auto label = parse_score_class(cells[1]);
    if (!label)
      throw ParseError(path.string(), i + 1, "unknown label '" + std::string(trim(cells[1])) + "'");
    const auto score = parse_real(cells[2]);
    if (!score || !std::isfinite(*score))
      throw ParseError(path.string(), i + 1, "bad score '" + std::string(trim(cells[2])) + "'");
    set.add({std::string(trim(cells[0])), *label, *score});
  }
  if (!header_seen) throw ParseError(path.string(), 0, "missing score header");
  return set;
}

void save_scores(const LabeledScoreSet& scores, const std::filesystem::path& path) {
  std::string text(kScoreHeader);
  text += '\n';
  for (const auto& e : scores.entries()) {
    text += e.pair_id;
    text += ',';
    text += to_string(e.label);
    text += ',';
    text += format_real(e.score);
    text += '\n';
  }
  write_text(path, text);
}

}  // namespace mpad
