#include "mpad/feature_file.hpp"

#include <charconv>
#include <cmath>

#include "mpad/error.hpp"
#include "mpad/text_format.hpp"

namespace mpad {

void save_features(const FeatureTable& table, const std::filesystem::path& path) {
  std::string text = "# mpad-features\n# channel=";
  text += to_string(table.channel);
  text += "\n# dim=" + std::to_string(table.dim) + "\npair_id,label,split";
  for (std::size_t i = 0; i < table.dim; ++i) text += ",f" + std::to_string(i);
  text += '\n';
  for (const auto& row : table.rows) {
    if (row.values.size() != table.dim) throw DimensionError("feature row '" + row.pair_id + "' has wrong dim");
    text += row.pair_id;
    text += ',';
    text += to_string(row.label);
    text += ',';
    text += to_string(row.split);
    for (double v : row.values) {
      text += ',';
      text += format_real(v);
    }
    text += '\n';
  }
  write_text(path, text);
}

FeatureTable load_features(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  const std::string source = path.string();
  if (lines.size() < 4 || lines[0] != "# mpad-features")
    throw ParseError(source, 1, "not a feature file");
  FeatureTable table;
  constexpr std::string_view channel_key = "# channel=";
  constexpr std::string_view dim_key = "# dim=";
  if (lines[1].rfind(channel_key, 0) != 0) throw ParseError(source, 2, "missing channel");
  const auto channel = parse_channel(std::string_view(lines[1]).substr(channel_key.size()));
  if (!channel) throw ParseError(source, 2, "unknown channel");
  table.channel = *channel;
  if (lines[2].rfind(dim_key, 0) != 0) throw ParseError(source, 3, "missing dim");
  {
    const std::string_view d = std::string_view(lines[2]).substr(dim_key.size());
    auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), table.dim);
    if (ec != std::errc{} || ptr != d.data() + d.size() || table.dim == 0)
      throw ParseError(source, 3, "bad dim");
  }
  if (split(lines[3], ',').size() != table.dim + 3) throw ParseError(source, 4, "header does not match dim");
  for (std::size_t i = 4; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cells = split(lines[i], ',');
    if (cells.size() != table.dim + 3)
      throw ParseError(source, i + 1, "expected " + std::to_string(table.dim + 3) + " columns");
    FeatureRow row;
    row.pair_id = std::string(trim(cells[0]));
    const auto label = parse_label(cells[1]);
    const auto split_value = parse_split(cells[2]);
    if (!label) throw ParseError(source, i + 1, "unknown label");
    if (!split_value) throw ParseError(source, i + 1, "unknown split");
    row.label = *label;
    row.split = *split_value;
    row.values.reserve(table.dim);
    for (std::size_t k = 3; k < cells.size(); ++k) {
      const auto v = parse_real(cells[k]);
      if (!v || !std::isfinite(*v)) throw ParseError(source, i + 1, "bad feature value");
      row.values.push_back(*v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace mpad
