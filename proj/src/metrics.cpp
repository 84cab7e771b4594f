#include "mpad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mpad/error.hpp"

namespace mpad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonempty(std::span<const double> scores, const char* what) {
  if (scores.empty()) throw InvalidArgument(std::string(what) + " scores must not be empty");
}

double fraction(std::size_t count, std::size_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}

std::size_t count_at_least(std::span<const double> scores, double threshold) {
  return static_cast<std::size_t>(
      std::count_if(scores.begin(), scores.end(), [&](double s) { return s >= threshold; }));
}

std::vector<double> sorted_copy(std::span<const double> scores) {
  std::vector<double> out(scores.begin(), scores.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Rates from pre-sorted score lists.
struct SortedRates {
  std::vector<double> attack;
  std::vector<double> bona_fide;

  OperatingPoint at(double t) const {
    const auto below_attack = std::lower_bound(attack.begin(), attack.end(), t) - attack.begin();
    const auto below_bona = std::lower_bound(bona_fide.begin(), bona_fide.end(), t) - bona_fide.begin();
    return {t, fraction(static_cast<std::size_t>(below_attack), attack.size()),
            fraction(bona_fide.size() - static_cast<std::size_t>(below_bona), bona_fide.size())};
  }
};

}  // namespace

FmrFnmr fmr_fnmr(std::span<const double> genuine, std::span<const double> impostor,
                 double threshold) {
  require_nonempty(genuine, "genuine");
  require_nonempty(impostor, "impostor");
  return {fraction(count_at_least(impostor, threshold), impostor.size()),
          fraction(genuine.size() - count_at_least(genuine, threshold), genuine.size())};
}

FmrThreshold threshold_at_fmr(std::span<const double> impostor, double target_fmr) {
  require_nonempty(impostor, "impostor");
  if (!(target_fmr > 0.0 && target_fmr <= 1.0))
    throw InvalidArgument("target FMR must lie in (0, 1]");
  const auto sorted = sorted_copy(impostor);
  const std::size_t n = sorted.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && sorted[k] == sorted[k - 1]) continue;
    const double fmr = fraction(n - k, n);
    if (fmr <= target_fmr) return {sorted[k], fmr};
  }
  return {std::nextafter(sorted.back(), kInf), 0.0};
}

double iapmr(std::span<const double> attack, double threshold) {
  require_nonempty(attack, "attack");
  return fraction(count_at_least(attack, threshold), attack.size());
}

double riapar(double iapmr, double fnmr) noexcept { return 1.0 + (iapmr - (1.0 - fnmr)); }

ApcerBpcer apcer_bpcer(std::span<const double> attack, std::span<const double> bona_fide,
                       double threshold) {
  require_nonempty(attack, "attack");
  require_nonempty(bona_fide, "bona fide");
  return {fraction(attack.size() - count_at_least(attack, threshold), attack.size()),
          fraction(count_at_least(bona_fide, threshold), bona_fide.size())};
}

std::vector<double> candidate_thresholds(std::span<const double> attack,
                                         std::span<const double> bona_fide) {
  std::vector<double> pooled(attack.begin(), attack.end());
  pooled.insert(pooled.end(), bona_fide.begin(), bona_fide.end());
  std::sort(pooled.begin(), pooled.end(), std::greater<>());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
  std::vector<double> out;
  out.reserve(pooled.size() + 1);
  out.push_back(kInf);
  for (std::size_t i = 0; i + 1 < pooled.size(); ++i)
    out.push_back(pooled[i + 1] + (pooled[i] - pooled[i + 1]) / 2);
  out.push_back(-kInf);
  return out;
}

DetCurve det_curve(std::span<const double> attack, std::span<const double> bona_fide) {
  require_nonempty(attack, "attack");
  require_nonempty(bona_fide, "bona fide");
  const SortedRates rates{sorted_copy(attack), sorted_copy(bona_fide)};
  DetCurve curve;
  for (double t : candidate_thresholds(attack, bona_fide)) curve.points.push_back(rates.at(t));
  return curve;
}

EqualErrorRate d_eer(std::span<const double> attack, std::span<const double> bona_fide) {
  const auto curve = det_curve(attack, bona_fide);
  const OperatingPoint* best = nullptr;
  for (const auto& p : curve.points) {
    if (!best) {
      best = &p;
      continue;
    }
    const double gap = std::abs(p.apcer - p.bpcer);
    const double best_gap = std::abs(best->apcer - best->bpcer);
    // descending thresholds: a later point with equal gap and bpcer is lower
    if (gap < best_gap || (gap == best_gap && p.bpcer <= best->bpcer)) best = &p;
  }
  return {(best->apcer + best->bpcer) / 2, *best};
}

OperatingPoint operating_point_at_apcer(std::span<const double> attack,
                                        std::span<const double> bona_fide, double apcer_cap) {
  if (!(apcer_cap > 0.0 && apcer_cap < 1.0)) throw InvalidArgument("APCER cap must lie in (0, 1)");
  const auto curve = det_curve(attack, bona_fide);
  // APCER falls as the threshold decreases, so the first compliant point
  // from the top has the highest threshold and the lowest BPCER.
  for (const auto& p : curve.points)
    if (p.apcer <= apcer_cap) return p;
  return curve.points.back();  // -inf always has APCER 0
}

double bpcer_at_apcer(std::span<const double> attack, std::span<const double> bona_fide,
                      double apcer_cap) {
  return operating_point_at_apcer(attack, bona_fide, apcer_cap).bpcer;
}

DistributionStats distribution_stats(std::span<const double> scores) {
  require_nonempty(scores, "input");
  DistributionStats s;
  s.min = scores.front();
  s.max = scores.front();
  double m2 = 0.0;
  for (double v : scores) {
    ++s.count;
    const double delta = v - s.mean;
    s.mean += delta / static_cast<double>(s.count);
    m2 += delta * (v - s.mean);
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.stdev = std::sqrt(m2 / static_cast<double>(s.count));
  return s;
}

VulnerabilityReport vulnerability_analysis(std::span<const double> genuine,
                                           std::span<const double> impostor,
                                           std::span<const double> attack,
                                           std::span<const double> target_fmrs) {
  VulnerabilityReport report{{}, distribution_stats(genuine), distribution_stats(impostor),
                             distribution_stats(attack)};
  for (double target : target_fmrs) {
    const auto at = threshold_at_fmr(impostor, target);
    VulnerabilityRow row;
    row.target_fmr = target;
    row.threshold = at.threshold;
    row.achieved_fmr = at.achieved_fmr;
    row.fnmr = fmr_fnmr(genuine, impostor, at.threshold).fnmr;
    row.iapmr = iapmr(attack, at.threshold);
    row.riapar = riapar(row.iapmr, row.fnmr);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mpad
