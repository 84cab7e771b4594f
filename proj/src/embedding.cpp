#include "mpad/embedding.hpp"

#include <cmath>
#include <string>

#include "mpad/error.hpp"
#include "mpad/text_format.hpp"

namespace mpad {

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("embedding must not be empty");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("embedding contains a non-finite value");
}

Embedding load_embedding(const std::filesystem::path& path, std::size_t expected_dim) {
  auto lines = read_lines(path);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(path.string(), 0, "empty embedding file");
  if (lines.size() != 1) throw ParseError(path.string(), 2, "embedding must be a single line");
  std::vector<double> values;
  for (auto token : split(lines.front(), ',')) {
    const auto v = parse_real(token);
    if (!v || !std::isfinite(*v))
      throw ParseError(path.string(), 1, "non-numeric value '" + std::string(trim(token)) + "'");
    values.push_back(*v);
  }
  if (values.size() != expected_dim)
    throw DimensionError(path.string() + ": expected " + std::to_string(expected_dim) +
                         " values, found " + std::to_string(values.size()));
  return Embedding(std::move(values));
}

void save_embedding(const Embedding& embedding, const std::filesystem::path& path) {
  std::string text;
  for (std::size_t i = 0; i < embedding.dim(); ++i) {
    if (i) text += ',';
    text += format_real(embedding.values()[i]);
  }
  text += '\n';
  write_text(path, text);
}

}  // namespace mpad
