#include "mpad/commands.hpp"

#include <cstdio>
#include <string>

#include "mpad/corpus.hpp"
#include "mpad/error.hpp"
#include "mpad/feature_file.hpp"
#include "mpad/scores.hpp"
#include "mpad/svm.hpp"
#include "mpad/text_format.hpp"

namespace mpad {

namespace fs = std::filesystem;

namespace {

const std::string& require(const std::optional<std::string>& entry, const char* what) {
  if (!entry) throw InvalidArgument(std::string("missing ") + what);
  return *entry;
}

FeatureVector extract_row(const fs::path& manifest, const PairRecord& r, const PipelineConfig& config) {
  auto path = [&](const std::optional<std::string>& entry, const char* what) {
    return resolve_input(manifest, require(entry, what));
  };
  switch (config.channel) {
    case Channel::embedding_diff:
      return embedding_difference(
          load_embedding(path(r.reference.embedding, "reference embedding"), config.embedding_dim),
          load_embedding(path(r.probe.embedding, "probe embedding"), config.embedding_dim),
          config.normalize_embeddings);
    case Channel::probe_only:
      return probe_only_feature(
          load_embedding(path(r.probe.embedding, "probe embedding"), config.embedding_dim));
    case Channel::landmark_diff:
      return landmark_difference(load_landmarks(path(r.reference.landmarks, "reference landmarks")),
                                 load_landmarks(path(r.probe.landmarks, "probe landmarks")));
    case Channel::lbp_grid: {
      const auto crop = config.alignment();
      const auto ref = align_face(read_ppm(path(r.reference.image, "reference image")),
                                  load_landmarks(path(r.reference.landmarks, "reference landmarks")), crop);
      const auto prb = align_face(read_ppm(path(r.probe.image, "probe image")),
                                  load_landmarks(path(r.probe.landmarks, "probe landmarks")), crop);
      return lbp_grid_features(ref, prb);
    }
  }
  throw InvalidArgument("unknown channel");
}

std::string percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", rate * 100.0);
  return buf;
}

}  // namespace

int cmd_extract(const fs::path& manifest, const PipelineConfig& config, const fs::path& out,
                std::ostream& log) {
  validate(config);
  const auto records = load_manifest(manifest);
  FeatureTable table;
  table.channel = config.channel;
  table.dim = channel_dim(config.channel, config.embedding_dim);
  std::size_t failures = 0;
  for (const auto& r : records) {
    try {
      auto f = extract_row(manifest, r, config);
      table.rows.push_back({r.pair_id, r.label, r.split, std::move(f.values)});
    } catch (const Error& e) {
      ++failures;
      log << "error: pair " << r.pair_id << ": " << e.what() << '\n';
    }
  }
  save_features(table, out);
  log << "extracted " << table.rows.size() << " of " << records.size() << " pairs ("
      << to_string(table.channel) << ", dim " << table.dim << ")\n";
  return failures == 0 ? 0 : 1;
}

int cmd_train(const fs::path& features, const PipelineConfig& config, const fs::path& out,
              std::ostream& log) {
  const auto table = load_features(features);
  std::vector<LabeledFeature> samples;
  for (const auto& row : table.rows)
    if (row.split == Split::train) samples.push_back({{table.channel, row.values}, row.label});
  if (samples.empty()) throw InvalidArgument("feature file has no split=train rows");
  SvmParams params;
  params.C = config.svm_c;
  params.gamma = config.gamma;
  const auto model = train(samples, params);
  save_model(model, out);
  log << "support vectors: " << model.support_vectors().size() << '\n'
      << "training accuracy: " << format_real(training_accuracy(model, samples)) << '\n';
  return 0;
}

int cmd_score(const fs::path& model_path, const fs::path& features, const fs::path& out,
              std::optional<Split> split, std::ostream& log) {
  const auto model = load_model(model_path);
  const auto table = load_features(features);
  if (table.channel != model.channel())
    throw InvalidArgument("feature channel " + std::string(to_string(table.channel)) +
                          " does not match model channel " + std::string(to_string(model.channel())));
  if (table.dim != model.feature_dim())
    throw DimensionError("feature dim " + std::to_string(table.dim) + " does not match model dim " +
                         std::to_string(model.feature_dim()));
  LabeledScoreSet scores;
  for (const auto& row : table.rows) {
    if (split && row.split != *split) continue;
    const double s = model.score({table.channel, row.values});
    scores.add({row.pair_id, row.label == Label::attack ? ScoreClass::attack : ScoreClass::bona_fide, s});
  }
  save_scores(scores, out);
  log << "scored " << scores.entries().size() << " pairs\n";
  return 0;
}

EvaluationReport evaluate_detection(std::span<const double> attack, std::span<const double> bona_fide) {
  return {d_eer(attack, bona_fide), operating_point_at_apcer(attack, bona_fide, 0.10),
          operating_point_at_apcer(attack, bona_fide, 0.05), det_curve(attack, bona_fide)};
}

int cmd_evaluate(const fs::path& scores_path, const std::optional<fs::path>& report_out,
                 const std::optional<fs::path>& det_out, std::ostream& log) {
  const auto scores = load_scores(scores_path);
  const auto attack = scores.scores_of(ScoreClass::attack);
  const auto bona_fide = scores.scores_of(ScoreClass::bona_fide);
  if (attack.empty() || bona_fide.empty())
    throw InvalidArgument("score file needs both attack and bona_fide entries");
  const auto report = evaluate_detection(attack, bona_fide);
  log << "D-EER (%): " << percent(report.eer.eer) << '\n'
      << "BPCER10 (%): " << percent(report.bpcer10.bpcer) << '\n'
      << "BPCER20 (%): " << percent(report.bpcer20.bpcer) << '\n';
  if (report_out) {
    std::string text = "metric,value\n";
    text += "d_eer_percent," + format_real(report.eer.eer * 100.0) + '\n';
    text += "d_eer_threshold," + format_real(report.eer.point.threshold) + '\n';
    text += "bpcer10_percent," + format_real(report.bpcer10.bpcer * 100.0) + '\n';
    text += "bpcer20_percent," + format_real(report.bpcer20.bpcer * 100.0) + '\n';
    write_text(*report_out, text);
  }
  if (det_out) {
    std::string text = "threshold,apcer,bpcer\n";
    for (const auto& p : report.det.points)
      text += format_real(p.threshold) + ',' + format_real(p.apcer) + ',' + format_real(p.bpcer) + '\n';
    write_text(*det_out, text);
  }
  return 0;
}

int cmd_vuln(const fs::path& genuine_path, const fs::path& impostor_path, const fs::path& attack_path,
             const std::vector<double>& fmr_percent, const fs::path& out,
             const std::optional<fs::path>& stats_out, std::ostream& log) {
  if (fmr_percent.empty()) throw InvalidArgument("at least one FMR operating point is required");
  std::vector<double> targets;
  for (double p : fmr_percent) {
    if (!(p > 0.0 && p <= 100.0)) throw InvalidArgument("FMR values must lie in (0, 100] percent");
    targets.push_back(p / 100.0);
  }
  const auto load_all = [](const fs::path& p) {
    auto s = load_scores(p).all_scores();
    if (s.empty()) throw InvalidArgument("score file " + p.string() + " is empty");
    return s;
  };
  const auto genuine = load_all(genuine_path);
  const auto impostor = load_all(impostor_path);
  const auto attack = load_all(attack_path);
  const auto report = vulnerability_analysis(genuine, impostor, attack, targets);

  std::string table = "FMR,FNMR,IAPMR,RIAPAR\n";
  log << "FMR(%)  threshold  FNMR(%)  IAPMR(%)  RIAPAR(%)\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    table += format_real(fmr_percent[i]) + ',' + format_real(r.fnmr * 100.0) + ',' +
             format_real(r.iapmr * 100.0) + ',' + format_real(r.riapar * 100.0) + '\n';
    log << format_real(fmr_percent[i]) << "  " << format_real(r.threshold) << "  " << percent(r.fnmr)
        << "  " << percent(r.iapmr) << "  " << percent(r.riapar) << '\n';
  }
  write_text(out, table);

  std::string stats = "class,count,mean,stdev,min,max\n";
  const std::pair<const char*, const DistributionStats*> classes[] = {
      {"genuine", &report.genuine}, {"impostor", &report.impostor}, {"attack", &report.attack}};
  log << "class  count  mean  st.dev.(population)  min  max\n";
  for (const auto& [name, s] : classes) {
    stats += std::string(name) + ',' + std::to_string(s->count) + ',' + format_real(s->mean) + ',' +
             format_real(s->stdev) + ',' + format_real(s->min) + ',' + format_real(s->max) + '\n';
    log << name << "  " << s->count << "  " << format_real(s->mean) << "  " << format_real(s->stdev)
        << "  " << format_real(s->min) << "  " << format_real(s->max) << '\n';
  }
  if (stats_out) write_text(*stats_out, stats);
  return 0;
}

int cmd_synth(const fs::path& targets_path, const fs::path& probes_path, const PipelineConfig& config,
              const fs::path& out_dir, std::ostream& log) {
  validate(config);
  const auto targets = load_pool(targets_path);
  const auto probes = load_pool(probes_path);
  SynthesisConfig synth;
  synth.crop = config.alignment();
  synth.gates = config.gates;
  synth.warp_intensity = config.warp_intensity;
  synth.seed = config.seed;
  synth.count = config.count;
  const auto gate_line = [&](const char* name, const GateCounts& c) {
    log << name << ": " << c.passed << "/" << c.examined << " passed quality gates (rejected: frontal "
        << c.rejected_frontal << ", mouth " << c.rejected_mouth << ", sanity " << c.rejected_sanity
        << ", unreadable " << c.rejected_geometry << ")\n";
  };
  const auto summary = generate_corpus(targets, probes, out_dir, synth);
  gate_line("targets", summary.targets);
  gate_line("probes", summary.probes);
  log << "attacks: " << summary.attacks << (summary.with_replacement ? " (sampled with replacement)" : "")
      << "\nbona fide pairs: " << summary.bona_fide << "\nmanifest: " << (out_dir / "manifest.csv").string()
      << '\n';
  return 0;
}

}  // namespace mpad
