// Command-line front end: extract, train, score, evaluate, vuln, synth.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mpad/commands.hpp"
#include "mpad/error.hpp"

namespace {

struct SharedOptions {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string out;
};

// Registers a flag whose value is forwarded to PipelineConfig under `key`.
void add_override(CLI::App* app, SharedOptions& shared, const std::string& flag, const std::string& key,
                  const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&shared, key](const std::string& v) { shared.overrides.emplace_back(key, v); }, help);
}

mpad::PipelineConfig build_config(const SharedOptions& shared) {
  mpad::PipelineConfig config = shared.config_path.empty() ? mpad::PipelineConfig{}
                                                           : mpad::load_config(shared.config_path);
  for (const auto& [key, value] : shared.overrides) mpad::apply_setting(config, key, value);
  mpad::validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential makeup presentation attack detection toolkit"};
  app.require_subcommand(1);
  SharedOptions shared;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", shared.config_path, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", shared.out, "output path")->required();
  };

  std::string manifest, features, model, scores, split_name, det_out, genuine, impostor, attack,
      targets, probes, stats_out;
  std::vector<double> fmr_list;

  auto* extract = app.add_subcommand("extract", "extract features for every manifest pair");
  common(extract);
  extract->add_option("--manifest", manifest, "pair manifest CSV")->required()->check(CLI::ExistingFile);
  add_override(extract, shared, "--channel", "channel", "embedding_diff|landmark_diff|lbp_grid|probe_only");
  add_override(extract, shared, "--dim", "dim", "embedding dimension");
  add_override(extract, shared, "--normalize", "normalize", "unit-normalize embeddings (true|false)");

  auto* train = app.add_subcommand("train", "train the RBF-SVM detector on split=train rows");
  common(train);
  train->add_option("--features", features, "feature file")->required()->check(CLI::ExistingFile);
  add_override(train, shared, "--C", "C", "SVM box constraint");
  add_override(train, shared, "--gamma", "gamma", "RBF width or 'scale'");

  auto* score = app.add_subcommand("score", "score feature rows with a trained detector");
  common(score);
  score->add_option("--model", model, "model file")->required()->check(CLI::ExistingFile);
  score->add_option("--features", features, "feature file")->required()->check(CLI::ExistingFile);
  score->add_option("--split", split_name, "restrict to train or test rows");

  auto* evaluate = app.add_subcommand("evaluate", "D-EER, BPCER10, BPCER20 and DET table");
  evaluate->add_option("--scores", scores, "score file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", shared.out, "report CSV");
  evaluate->add_option("--det", det_out, "DET curve CSV");

  auto* vuln = app.add_subcommand("vuln", "vulnerability analysis of comparison scores");
  common(vuln);
  vuln->add_option("--genuine", genuine, "genuine comparison scores")->required()->check(CLI::ExistingFile);
  vuln->add_option("--impostor", impostor, "impostor comparison scores")->required()->check(CLI::ExistingFile);
  vuln->add_option("--attack", attack, "attack comparison scores")->required()->check(CLI::ExistingFile);
  vuln->add_option("--fmr", fmr_list, "FMR operating points in percent")
      ->delimiter(',')
      ->default_str("0.001,0.01,0.1,1");
  vuln->add_option("--stats", stats_out, "distribution statistics CSV");

  auto* synth = app.add_subcommand("synth", "generate a synthetic makeup attack corpus");
  common(synth);
  synth->add_option("--targets", targets, "target (makeup) pool CSV")->required()->check(CLI::ExistingFile);
  synth->add_option("--probes", probes, "probe (bona fide) pool CSV")->required()->check(CLI::ExistingFile);
  add_override(synth, shared, "--seed", "seed", "pairing seed");
  add_override(synth, shared, "--count", "count", "number of synthetic attacks");
  add_override(synth, shared, "--intensity", "warp_intensity", "warp intensity in [0, 1]");

  CLI11_PARSE(app, argc, argv);

  try {
    auto opt_path = [](const std::string& s) {
      return s.empty() ? std::nullopt : std::optional<std::filesystem::path>(s);
    };
    if (extract->parsed()) return mpad::cmd_extract(manifest, build_config(shared), shared.out, std::cout);
    if (train->parsed()) return mpad::cmd_train(features, build_config(shared), shared.out, std::cout);
    if (score->parsed()) {
      std::optional<mpad::Split> split;
      if (!split_name.empty() && split_name != "all") {
        split = mpad::parse_split(split_name);
        if (!split) throw mpad::InvalidArgument("--split must be train, test or all");
      }
      return mpad::cmd_score(model, features, shared.out, split, std::cout);
    }
    if (evaluate->parsed()) return mpad::cmd_evaluate(scores, opt_path(shared.out), opt_path(det_out), std::cout);
    if (vuln->parsed()) {
      if (fmr_list.empty()) fmr_list = {0.001, 0.01, 0.1, 1.0};
      return mpad::cmd_vuln(genuine, impostor, attack, fmr_list, shared.out, opt_path(stats_out), std::cout);
    }
    if (synth->parsed()) return mpad::cmd_synth(targets, probes, build_config(shared), shared.out, std::cout);
  } catch (const mpad::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
