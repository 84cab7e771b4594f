#include "mpad/config.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "mpad/error.hpp"
#include "mpad/text_format.hpp"

namespace mpad {

namespace {

std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
  value = trim(value);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty())
    throw InvalidArgument(std::string(key) + ": expected a non-negative integer, got '" +
                          std::string(value) + "'");
  return out;
}

double parse_number(std::string_view key, std::string_view value) {
  const auto v = parse_real(value);
  if (!v || !std::isfinite(*v))
    throw InvalidArgument(std::string(key) + ": expected a number, got '" + std::string(value) + "'");
  return *v;
}

double parse_positive(std::string_view key, std::string_view value) {
  const double v = parse_number(key, value);
  if (!(v > 0.0)) throw InvalidArgument(std::string(key) + " must be positive");
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw InvalidArgument(std::string(key) + ": expected true/false, got '" + std::string(value) + "'");
}

int parse_crop_side(std::string_view key, std::string_view value) {
  const auto v = parse_unsigned(key, value);
  if (v < 12 || v > 4096) throw InvalidArgument(std::string(key) + " must lie in [12, 4096]");
  return static_cast<int>(v);
}

}  // namespace

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "channel") {
    const auto ch = parse_channel(value);
    if (!ch) throw InvalidArgument("channel: unknown channel '" + std::string(value) + "'");
    c.channel = *ch;
  } else if (key == "dim") {
    const auto d = parse_unsigned(key, value);
    if (d < 1 || d > 1'000'000) throw InvalidArgument("dim must lie in [1, 1000000]");
    c.embedding_dim = d;
  } else if (key == "normalize") {
    c.normalize_embeddings = parse_bool(key, value);
  } else if (key == "C") {
    c.svm_c = parse_positive(key, value);
  } else if (key == "gamma") {
    c.gamma = value == "scale" ? GammaSetting::scale() : GammaSetting::fixed(parse_positive(key, value));
  } else if (key == "crop_width") {
    c.crop_width = parse_crop_side(key, value);
  } else if (key == "crop_height") {
    c.crop_height = parse_crop_side(key, value);
  } else if (key == "seed") {
    c.seed = parse_unsigned(key, value);
  } else if (key == "count") {
    c.count = parse_unsigned(key, value);
  } else if (key == "warp_intensity") {
    const double v = parse_number(key, value);
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("warp_intensity must lie in [0, 1]");
    c.warp_intensity = v;
  } else if (key == "gate_yaw") {
    c.gates.max_yaw_asymmetry = parse_positive(key, value);
  } else if (key == "gate_lip_gap") {
    c.gates.max_lip_gap = parse_positive(key, value);
  } else if (key == "gate_box") {
    c.gates.landmark_box = parse_positive(key, value);
  } else {
    throw InvalidArgument("unknown configuration key '" + std::string(key) + "'");
  }
}

void validate(const PipelineConfig& c) {
  if (c.crop_width % static_cast<int>(kLbpGrid) != 0 || c.crop_height % static_cast<int>(kLbpGrid) != 0)
    throw InvalidArgument("crop size must be divisible by 4");
}

PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig config;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(path.string(), i + 1, "expected key=value");
    try {
      apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw ParseError(path.string(), i + 1, e.what());
    }
  }
  validate(config);
  return config;
}

}  // namespace mpad
