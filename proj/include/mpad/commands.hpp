#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "mpad/config.hpp"
#include "mpad/manifest.hpp"
#include "mpad/metrics.hpp"

namespace mpad {

// Each command returns the process exit status: 0 on full success, 1 when
// some rows failed. Fatal problems are thrown as mpad::Error.

/// Extracts `config.channel` features for every manifest row. Failing rows are
/// reported on `log` with their pair_id and left out of the output.
int cmd_extract(const std::filesystem::path& manifest, const PipelineConfig& config,
                const std::filesystem::path& out, std::ostream& log);

/// Trains on the split=train rows and writes the model.
int cmd_train(const std::filesystem::path& features, const PipelineConfig& config,
              const std::filesystem::path& out, std::ostream& log);

/// Scores feature rows (optionally restricted to one split).
int cmd_score(const std::filesystem::path& model, const std::filesystem::path& features,
              const std::filesystem::path& out, std::optional<Split> split, std::ostream& log);

struct EvaluationReport {
  EqualErrorRate eer;
  OperatingPoint bpcer10;
  OperatingPoint bpcer20;
  DetCurve det;
};

EvaluationReport evaluate_detection(std::span<const double> attack, std::span<const double> bona_fide);

/// D-EER, BPCER10 and BPCER20 in percent on `log`; optional report CSV
/// (metric,value) and DET CSV (threshold,apcer,bpcer).
int cmd_evaluate(const std::filesystem::path& scores, const std::optional<std::filesystem::path>& report_out,
                 const std::optional<std::filesystem::path>& det_out, std::ostream& log);

/// `fmr_percent` entries are percentages in (0, 100]. Writes FMR,FNMR,IAPMR,RIAPAR
/// (all %) to `out` and per-class distribution statistics to `stats_out`.
int cmd_vuln(const std::filesystem::path& genuine, const std::filesystem::path& impostor,
             const std::filesystem::path& attack, const std::vector<double>& fmr_percent,
             const std::filesystem::path& out, const std::optional<std::filesystem::path>& stats_out,
             std::ostream& log);

/// Generates a synthetic attack corpus under `out_dir` from two pool files.
int cmd_synth(const std::filesystem::path& targets, const std::filesystem::path& probes,
              const PipelineConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace mpad
