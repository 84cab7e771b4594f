#include "mpad/manifest.hpp"

#include <set>

#include "mpad/error.hpp"
#include "mpad/text_format.hpp"

namespace mpad {

std::string_view to_string(Label label) noexcept {
  return label == Label::attack ? "attack" : "bona_fide";
}

std::string_view to_string(Split split) noexcept { return split == Split::test ? "test" : "train"; }

std::optional<Label> parse_label(std::string_view token) noexcept {
  token = trim(token);
  if (token == "bona_fide") return Label::bona_fide;
  if (token == "attack") return Label::attack;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view token) noexcept {
  token = trim(token);
  if (token == "train") return Split::train;
  if (token == "test") return Split::test;
  return std::nullopt;
}

namespace {

std::optional<std::string> optional_cell(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  return std::string(cell);
}

std::string_view cell_or_empty(const std::optional<std::string>& value) {
  return value ? std::string_view(*value) : std::string_view();
}

}  // namespace

std::vector<PairRecord> load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("manifest not found: " + path.string());
  const auto lines = read_lines(path);
  const auto expected_columns = split(kManifestHeader, ',').size();

  std::vector<PairRecord> records;
  bool header_seen = false;
  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = lines[i];
    if (trim(line).empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (trim(line) != kManifestHeader)
        throw ParseError(path.string(), line_no, "unexpected manifest header");
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != expected_columns)
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(expected_columns) + " columns, found " +
                           std::to_string(cells.size()));
    PairRecord record;
    record.pair_id = std::string(trim(cells[0]));
    if (record.pair_id.empty()) throw ParseError(path.string(), line_no, "empty pair_id");
    if (!ids.insert(record.pair_id).second)
      throw ParseError(path.string(), line_no, "duplicate pair_id '" + record.pair_id + "'");
    record.reference = {optional_cell(cells[1]), optional_cell(cells[3]), optional_cell(cells[5])};
    record.probe = {optional_cell(cells[2]), optional_cell(cells[4]), optional_cell(cells[6])};
    const auto label = parse_label(cells[7]);
    if (!label)
      throw ParseError(path.string(), line_no,
                       "unknown label '" + std::string(trim(cells[7])) + "'");
    const auto split_value = parse_split(cells[8]);
    if (!split_value)
      throw ParseError(path.string(), line_no,
                       "unknown split '" + std::string(trim(cells[8])) + "'");
    record.label = *label;
    record.split = *split_value;
    records.push_back(std::move(record));
  }
  if (!header_seen) throw ParseError(path.string(), 0, "missing manifest header");
  return records;
}

void save_manifest(const std::filesystem::path& path, const std::vector<PairRecord>& records,
                   const std::vector<std::string>& comments) {
  std::string text;
  for (const auto& c : comments) {
    text += "# ";
    text += c;
    text += '\n';
  }
  text += kManifestHeader;
  text += '\n';
  for (const auto& r : records) {
    for (std::string_view cell :
         {std::string_view(r.pair_id), cell_or_empty(r.reference.image), cell_or_empty(r.probe.image),
          cell_or_empty(r.reference.landmarks), cell_or_empty(r.probe.landmarks),
          cell_or_empty(r.reference.embedding), cell_or_empty(r.probe.embedding)}) {
      if (cell.find(',') != std::string_view::npos)
        throw InvalidArgument("manifest cells must not contain commas: " + std::string(cell));
      text += cell;
      text += ',';
    }
    text += to_string(r.label);
    text += ',';
    text += to_string(r.split);
    text += '\n';
  }
  write_text(path, text);
}

std::filesystem::path resolve_input(const std::filesystem::path& manifest_path,
                                    const std::string& entry) {
  const std::filesystem::path p(entry);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

}  // namespace mpad
