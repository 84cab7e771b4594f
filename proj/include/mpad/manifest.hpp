#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mpad {

enum class Label { bona_fide, attack };
enum class Split { train, test };

std::string_view to_string(Label label) noexcept;
std::string_view to_string(Split split) noexcept;
std::optional<Label> parse_label(std::string_view token) noexcept;
std::optional<Split> parse_split(std::string_view token) noexcept;

/// Input files describing one face sample; every entry is optional.
struct SampleSource {
  std::optional<std::string> image;
  std::optional<std::string> landmarks;
  std::optional<std::string> embedding;

  bool operator==(const SampleSource&) const = default;
};

/// One reference/probe comparison with its ground truth.
struct PairRecord {
  std::string pair_id;
  SampleSource reference;
  SampleSource probe;
  Label label = Label::bona_fide;
  Split split = Split::train;

  bool operator==(const PairRecord&) const = default;
};

/// Column order of the manifest CSV.
inline constexpr std::string_view kManifestHeader =
    "pair_id,ref_image,probe_image,ref_landmarks,probe_landmarks,ref_embedding,probe_embedding,"
    "label,split";

/// Parses a manifest. Lines starting with '#' are metadata comments and are
/// skipped; the first other line must be the header. Errors report the line.
std::vector<PairRecord> load_manifest(const std::filesystem::path& path);

/// Writes `records` in manifest format, preceded by one '#' line per comment.
void save_manifest(const std::filesystem::path& path, const std::vector<PairRecord>& records,
                   const std::vector<std::string>& comments = {});

/// Resolves a manifest-relative path against the manifest's directory.
std::filesystem::path resolve_input(const std::filesystem::path& manifest_path,
                                    const std::string& entry);

}  // namespace mpad
