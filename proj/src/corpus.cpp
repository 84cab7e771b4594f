#include "mpad/corpus.hpp"

#include <cstdio>
#include <limits>
#include <map>

#include "mpad/error.hpp"
#include "mpad/text_format.hpp"
#include "mpad/warp.hpp"

namespace mpad {

namespace fs = std::filesystem;

std::vector<PoolEntry> load_pool(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("pool not found: " + path.string());
  const auto lines = read_lines(path);
  const fs::path base = fs::absolute(path).parent_path();
  auto resolve = [&](std::string_view cell) {
    fs::path p{std::string(trim(cell))};
    return (p.is_absolute() ? p : base / p).lexically_normal();
  };
  std::vector<PoolEntry> pool;
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (trim(line).empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (trim(line) != kPoolHeader) throw ParseError(path.string(), i + 1, "unexpected pool header");
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw ParseError(path.string(), i + 1, "expected 4 columns");
    PoolEntry e;
    e.subject_id = std::string(trim(cells[0]));
    if (e.subject_id.empty()) throw ParseError(path.string(), i + 1, "empty subject_id");
    if (trim(cells[1]).empty() || trim(cells[2]).empty())
      throw ParseError(path.string(), i + 1, "image and landmarks are required");
    e.image = resolve(cells[1]);
    e.landmarks = resolve(cells[2]);
    if (!trim(cells[3]).empty()) e.embedding = resolve(cells[3]);
    pool.push_back(std::move(e));
  }
  if (!header_seen) throw ParseError(path.string(), 0, "missing pool header");
  return pool;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("uniform_below: empty range");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

PairingPlan plan_attack_pairs(std::span<const std::string> target_subjects,
                              std::span<const std::string> probe_subjects, std::size_t count,
                              std::uint64_t seed) {
  std::vector<CrossPair> valid;
  for (std::size_t t = 0; t < target_subjects.size(); ++t)
    for (std::size_t p = 0; p < probe_subjects.size(); ++p)
      if (target_subjects[t] != probe_subjects[p]) valid.push_back({t, p});

  PairingPlan plan;
  plan.available = valid.size();
  if (count == 0) return plan;
  if (valid.empty()) throw InvalidArgument("no cross-subject target/probe pairs available");
  std::mt19937_64 rng(seed);
  if (count <= valid.size()) {
    for (std::size_t k = 0; k < count; ++k) {
      const auto j = k + uniform_below(rng, valid.size() - k);
      std::swap(valid[k], valid[j]);
    }
    valid.resize(count);
    plan.pairs = std::move(valid);
  } else {
    plan.with_replacement = true;
    plan.pairs.reserve(count);
    for (std::size_t k = 0; k < count; ++k) plan.pairs.push_back(valid[uniform_below(rng, valid.size())]);
  }
  return plan;
}

std::vector<CrossPair> plan_bona_fide_pairs(std::span<const std::string> probe_subjects) {
  std::map<std::string, std::size_t, std::less<>> first;
  std::vector<CrossPair> pairs;
  for (std::size_t i = 0; i < probe_subjects.size(); ++i) {
    const auto [it, inserted] = first.emplace(probe_subjects[i], i);
    if (!inserted) pairs.push_back({it->second, i});
  }
  return pairs;
}

SyntheticAttack synthesize_attack(const RasterImage& probe_image, const LandmarkSet& probe_lm,
                                  const RasterImage& target_image, const LandmarkSet& target_lm,
                                  const SynthesisConfig& config) {
  const auto probe = align_face(probe_image, probe_lm, config.crop);
  const auto target = align_face(target_image, target_lm, config.crop);
  const auto probe_canon = transform_landmarks(probe_lm, probe.transform);
  const auto target_canon = transform_landmarks(target_lm, target.transform);
  auto warped = warp_to_target(probe.image, probe_canon, target_canon, config.warp_intensity);
  auto colored = makeup_color_transfer(warped.image, warped.landmarks, target.image, target_canon,
                                       config.regions);
  return {std::move(colored), std::move(warped.landmarks)};
}

namespace {

struct GatedEntry {
  std::size_t index;
  LandmarkSet landmarks;
};

std::vector<GatedEntry> apply_gates(std::span<const PoolEntry> pool, const QualityThresholds& gates,
                                    GateCounts& counts) {
  std::vector<GatedEntry> kept;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    ++counts.examined;
    std::optional<LandmarkSet> lm;
    try {
      lm = load_landmarks(pool[i].landmarks);
    } catch (const Error&) {
      ++counts.rejected_geometry;
      continue;
    }
    if (!(inter_ocular_distance(*lm) > 0.0)) {
      ++counts.rejected_geometry;
      continue;
    }
    const auto report = quality_gate(*lm, gates);
    if (!report.frontal_pose) ++counts.rejected_frontal;
    if (!report.mouth_closed) ++counts.rejected_mouth;
    if (!report.landmark_sanity) ++counts.rejected_sanity;
    if (!report.passed()) continue;
    ++counts.passed;
    kept.push_back({i, *lm});
  }
  return kept;
}

std::string numbered(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%05zu", prefix, n);
  return buf;
}

std::optional<std::string> path_cell(const std::optional<fs::path>& p) {
  if (!p) return std::nullopt;
  return p->string();
}

}  // namespace

CorpusSummary generate_corpus(std::span<const PoolEntry> targets, std::span<const PoolEntry> probes,
                              const fs::path& out_dir, const SynthesisConfig& config) {
  if (targets.empty()) throw InvalidArgument("target pool is empty");
  if (probes.empty()) throw InvalidArgument("probe pool is empty");
  CorpusSummary summary;
  const auto gated_targets = apply_gates(targets, config.gates, summary.targets);
  const auto gated_probes = apply_gates(probes, config.gates, summary.probes);
  auto gate_message = [](const char* pool, const GateCounts& c) {
    return std::string(pool) + " pool empty after quality gates (examined " +
           std::to_string(c.examined) + ", frontal " + std::to_string(c.rejected_frontal) +
           ", mouth " + std::to_string(c.rejected_mouth) + ", sanity " +
           std::to_string(c.rejected_sanity) + ", unreadable " + std::to_string(c.rejected_geometry) + ")";
  };
  if (gated_targets.empty()) throw InvalidArgument(gate_message("target", summary.targets));
  if (gated_probes.empty()) throw InvalidArgument(gate_message("probe", summary.probes));

  std::vector<std::string> target_subjects, probe_subjects;
  for (const auto& g : gated_targets) target_subjects.push_back(targets[g.index].subject_id);
  for (const auto& g : gated_probes) probe_subjects.push_back(probes[g.index].subject_id);
  const auto plan = plan_attack_pairs(target_subjects, probe_subjects, config.count, config.seed);
  const auto genuine = plan_bona_fide_pairs(probe_subjects);
  summary.with_replacement = plan.with_replacement;

  fs::create_directories(out_dir / "images");
  fs::create_directories(out_dir / "landmarks");

  std::string sources = std::string(kAttackSourcesHeader) + "\n";
  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    const auto& target = gated_targets[plan.pairs[k].target];
    const auto& probe = gated_probes[plan.pairs[k].probe];
    const auto& target_entry = targets[target.index];
    const auto& probe_entry = probes[probe.index];
    const auto attack = synthesize_attack(read_ppm(probe_entry.image), probe.landmarks,
                                          read_ppm(target_entry.image), target.landmarks, config);
    const std::string name = numbered("attack", k);
    const std::string image_rel = "images/" + name + ".ppm";
    const std::string landmarks_rel = "landmarks/" + name + ".txt";
    write_ppm(attack.image, out_dir / image_rel);
    save_landmarks(attack.landmarks, out_dir / landmarks_rel);

    PairRecord r;
    r.pair_id = numbered("synth_attack", k);
    r.reference = {target_entry.image.string(), target_entry.landmarks.string(),
                   path_cell(target_entry.embedding)};
    r.probe = {image_rel, landmarks_rel, std::nullopt};
    r.label = Label::attack;
    r.split = config.split;
    sources += r.pair_id + ',' + target_entry.subject_id + ',' + probe_entry.subject_id + ',' +
               target_entry.image.string() + ',' + probe_entry.image.string() + '\n';
    summary.records.push_back(std::move(r));
  }
  summary.attacks = plan.pairs.size();
  write_text(out_dir / "attack_sources.csv", sources);

  for (std::size_t k = 0; k < genuine.size(); ++k) {
    const auto& ref = probes[gated_probes[genuine[k].target].index];
    const auto& prb = probes[gated_probes[genuine[k].probe].index];
    PairRecord r;
    r.pair_id = numbered("bona_fide", k);
    r.reference = {ref.image.string(), ref.landmarks.string(), path_cell(ref.embedding)};
    r.probe = {prb.image.string(), prb.landmarks.string(), path_cell(prb.embedding)};
    r.label = Label::bona_fide;
    r.split = config.split;
    summary.records.push_back(std::move(r));
  }
  summary.bona_fide = genuine.size();

  const std::vector<std::string> comments{
      "synthetic corpus",
      "seed=" + std::to_string(config.seed),
      "requested_attacks=" + std::to_string(config.count),
      "attacks=" + std::to_string(summary.attacks),
      "bona_fide=" + std::to_string(summary.bona_fide),
      "available_cross_pairs=" + std::to_string(plan.available),
      std::string("replacement=") + (plan.with_replacement ? "true" : "false"),
      "warp_intensity=" + format_real(config.warp_intensity),
      "attack_reference=target_image",
      "targets_passed=" + std::to_string(summary.targets.passed) + "/" +
          std::to_string(summary.targets.examined),
      "probes_passed=" + std::to_string(summary.probes.passed) + "/" +
          std::to_string(summary.probes.examined),
  };
  save_manifest(out_dir / "manifest.csv", summary.records, comments);
  return summary;
}

}  // namespace mpad
