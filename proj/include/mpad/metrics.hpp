#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mpad {

// Comparison scores: higher = better match, a comparison "matches" when
// score >= threshold. Detection scores: higher = more attack-like, a
// presentation is classified as attack when score >= threshold.
// Every function throws InvalidArgument on an empty score list.

struct FmrFnmr {
  double fmr = 0.0;   // impostor scores >= threshold
  double fnmr = 0.0;  // genuine scores < threshold
};

FmrFnmr fmr_fnmr(std::span<const double> genuine, std::span<const double> impostor,
                 double threshold);

struct FmrThreshold {
  double threshold = 0.0;
  double achieved_fmr = 0.0;
};

/// Smallest threshold whose empirical FMR does not exceed `target_fmr`.
/// Candidates are the distinct impostor scores; when even the maximum admits
/// too much, the next representable value above it is returned (FMR 0).
FmrThreshold threshold_at_fmr(std::span<const double> impostor, double target_fmr);

/// Fraction of attack comparison scores >= threshold.
double iapmr(std::span<const double> attack, double threshold);

/// 1 + (iapmr - (1 - fnmr)).
double riapar(double iapmr, double fnmr) noexcept;

struct ApcerBpcer {
  double apcer = 0.0;  // attack scores < threshold
  double bpcer = 0.0;  // bona fide scores >= threshold
};

ApcerBpcer apcer_bpcer(std::span<const double> attack, std::span<const double> bona_fide,
                       double threshold);

/// +inf, midpoints of adjacent distinct pooled scores, -inf; descending.
std::vector<double> candidate_thresholds(std::span<const double> attack,
                                         std::span<const double> bona_fide);

struct OperatingPoint {
  double threshold = 0.0;
  double apcer = 0.0;
  double bpcer = 0.0;
};

struct EqualErrorRate {
  double eer = 0.0;  // (apcer + bpcer) / 2 at the chosen threshold
  OperatingPoint point;
};

/// Candidate threshold minimizing |APCER - BPCER|; ties go to the lower
/// BPCER, then to the lower threshold.
EqualErrorRate d_eer(std::span<const double> attack, std::span<const double> bona_fide);

/// Lowest-BPCER candidate point with APCER <= apcer_cap. apcer_cap in (0, 1).
OperatingPoint operating_point_at_apcer(std::span<const double> attack,
                                        std::span<const double> bona_fide, double apcer_cap);

/// BPCER10 uses apcer_cap 0.10, BPCER20 uses 0.05.
double bpcer_at_apcer(std::span<const double> attack, std::span<const double> bona_fide,
                      double apcer_cap);

struct DistributionStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stdev = 0.0;  // population (divides by N)
  double min = 0.0;
  double max = 0.0;
};

DistributionStats distribution_stats(std::span<const double> scores);

/// One point per candidate threshold, in descending threshold order.
struct DetCurve {
  std::vector<OperatingPoint> points;
};

DetCurve det_curve(std::span<const double> attack, std::span<const double> bona_fide);

struct VulnerabilityRow {
  double target_fmr = 0.0;
  double threshold = 0.0;
  double achieved_fmr = 0.0;
  double fnmr = 0.0;
  double iapmr = 0.0;
  double riapar = 0.0;
};

struct VulnerabilityReport {
  std::vector<VulnerabilityRow> rows;
  DistributionStats genuine;
  DistributionStats impostor;
  DistributionStats attack;
};

/// One row per target FMR (fractions in (0, 1]).
VulnerabilityReport vulnerability_analysis(std::span<const double> genuine,
                                           std::span<const double> impostor,
                                           std::span<const double> attack,
                                           std::span<const double> target_fmrs);

}  // namespace mpad
