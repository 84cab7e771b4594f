#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "mpad/features.hpp"
#include "mpad/manifest.hpp"

namespace mpad {

/// exp(-gamma * |a - b|^2). Throws DimensionError on length mismatch.
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Either an explicit RBF width or the "scale" heuristic 1 / (dim * variance).
struct GammaSetting {
  bool use_scale = true;
  double value = 0.0;

  static GammaSetting scale() { return {}; }
  static GammaSetting fixed(double gamma) { return {false, gamma}; }
};

struct SvmParams {
  double C = 1.0;
  GammaSetting gamma;
  double tolerance = 1e-3;  // maximal KKT violation at termination
  std::size_t max_iterations = 10'000'000;
  double support_threshold = 1e-8;
};

struct LabeledFeature {
  FeatureVector feature;
  Label label = Label::bona_fide;  // bona_fide -> -1, attack -> +1
};

inline int label_sign(Label label) noexcept { return label == Label::attack ? 1 : -1; }

/// Resolves `setting` against the training features.
double resolve_gamma(std::span<const LabeledFeature> samples, const GammaSetting& setting);

/// Solution of min 1/2 a'Qa - e'a s.t. 0 <= a <= C, y'a = 0, Q_ij = y_i y_j K_ij.
struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;       // decision f(x) = sum a_i y_i K(x_i, x) + bias
  double objective = 0.0;  // dual objective in maximization form: sum a - 1/2 a'Qa
  std::size_t iterations = 0;
  double max_violation = 0.0;
};

/// SMO with maximal-violating-pair selection (first index wins ties) on a
/// precomputed symmetric kernel matrix in row-major order, stopped at
/// `tolerance` and finished by an exact active-set solve of the free block.
DualSolution solve_svm_dual(std::span<const double> kernel, std::span<const int> y, double C,
                            double tolerance, std::size_t max_iterations = 10'000'000);

/// score = 1 / (1 + exp(A f + B)).
struct SigmoidCalibration {
  double A = -1.0;
  double B = 0.0;

  double operator()(double decision) const noexcept;
};

/// Regularized maximum-likelihood sigmoid fit (Newton with backtracking).
/// `y` holds +1 for attacks and -1 for bona fide samples.
SigmoidCalibration fit_sigmoid(std::span<const double> decisions, std::span<const int> y);

/// RBF-SVM with calibrated output. Immutable once trained.
class TrainedDetector {
 public:
  TrainedDetector(Channel channel, std::size_t feature_dim, double gamma, double C, double bias,
                  SigmoidCalibration calibration, std::vector<std::vector<double>> support_vectors,
                  std::vector<double> dual_coefficients);

  Channel channel() const noexcept { return channel_; }
  std::size_t feature_dim() const noexcept { return feature_dim_; }
  double gamma() const noexcept { return gamma_; }
  double C() const noexcept { return C_; }
  double bias() const noexcept { return bias_; }
  const SigmoidCalibration& calibration() const noexcept { return calibration_; }
  const std::vector<std::vector<double>>& support_vectors() const noexcept { return support_vectors_; }
  const std::vector<double>& dual_coefficients() const noexcept { return dual_coefficients_; }

  /// Raw SVM decision value; positive means attack.
  double decision(std::span<const double> x) const;

  /// Calibrated attack score in [0, 1]. Throws on channel or dim mismatch.
  double score(const FeatureVector& feature) const;

 private:
  Channel channel_;
  std::size_t feature_dim_;
  double gamma_;
  double C_;
  double bias_;
  SigmoidCalibration calibration_;
  std::vector<std::vector<double>> support_vectors_;
  std::vector<double> dual_coefficients_;
};

/// Trains the detector. Throws InvalidArgument for single-class input,
/// non-finite or mixed-channel features; DimensionError for ragged input.
TrainedDetector train(std::span<const LabeledFeature> samples, const SvmParams& params = {});

/// Fraction of samples whose decision sign matches the label.
double training_accuracy(const TrainedDetector& model, std::span<const LabeledFeature> samples);

inline constexpr int kModelFormatVersion = 1;

/// JSON document; throws InvalidArgument for a model without support vectors.
void save_model(const TrainedDetector& model, const std::filesystem::path& path);
/// Throws ParseError on malformed or version-mismatched files.
TrainedDetector load_model(const std::filesystem::path& path);

}  // namespace mpad
