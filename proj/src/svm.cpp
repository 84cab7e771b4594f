#include "mpad/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "mpad/error.hpp"

namespace mpad {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  if (a.size() != b.size())
    throw DimensionError("rbf_kernel: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double resolve_gamma(std::span<const LabeledFeature> samples, const GammaSetting& setting) {
  if (!setting.use_scale) {
    if (!(setting.value > 0.0) || !std::isfinite(setting.value))
      throw InvalidArgument("gamma must be positive");
    return setting.value;
  }
  if (samples.empty()) throw InvalidArgument("gamma=scale needs training samples");
  const std::size_t dim = samples.front().feature.dim();
  double mean = 0.0;
  std::size_t n = 0;
  for (const auto& s : samples)
    for (double v : s.feature.values) {
      ++n;
      mean += (v - mean) / static_cast<double>(n);
    }
  double var = 0.0;
  for (const auto& s : samples)
    for (double v : s.feature.values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  return var > 0.0 ? 1.0 / (static_cast<double>(dim) * var) : 1.0;
}

namespace {

constexpr double kTau = 1e-12;

bool is_up(int y, double a, double C) { return (y > 0 && a < C) || (y < 0 && a > 0); }
bool is_low(int y, double a, double C) { return (y > 0 && a > 0) || (y < 0 && a < C); }

constexpr std::size_t kMaxPolishSize = 2000;

double objective_of(std::span<const double> alpha, std::span<const double> G) {
  double obj = 0.0;
  for (std::size_t t = 0; t < alpha.size(); ++t) obj += alpha[t] * (G[t] - 1.0);
  return -0.5 * obj;
}

enum class Bound { lower, upper, free };

// Primal active-set finishing step started from the SMO iterate. Each round
// solves the free block exactly (stationarity plus y'a = 0) and moves toward
// that solution as far as the box allows; a blocking variable is pinned to
// its bound, otherwise the bound variable with the largest wrong-signed
// gradient is released. Iterates stay feasible and the objective never drops.
void polish_active_set(std::span<const double> kernel, std::span<const int> y, double C,
                       std::vector<double>& alpha, std::vector<double>& G) {
  const std::size_t n = y.size();
  if (n > kMaxPolishSize) return;
  auto K = [&](std::size_t i, std::size_t j) { return kernel[i * n + j]; };
  std::vector<Bound> state(n);
  for (std::size_t t = 0; t < n; ++t)
    state[t] = alpha[t] <= 0.0 ? Bound::lower : alpha[t] >= C ? Bound::upper : Bound::free;
  std::vector<double> cur = alpha;

  for (std::size_t round = 0; round < 4 * n + 8; ++round) {
    std::vector<std::size_t> free_idx;
    for (std::size_t t = 0; t < n; ++t)
      if (state[t] == Bound::free) free_idx.push_back(t);
    const std::size_t m = free_idx.size();

    std::vector<double> grad(n, -1.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (cur[j] != 0.0) grad[i] += y[i] * y[j] * K(i, j) * cur[j];

    double nu = 0.0;
    if (m > 0) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t i = free_idx[r];
        for (std::size_t c = 0; c < m; ++c) A(r, c) = y[i] * y[free_idx[c]] * K(i, free_idx[c]);
        A(r, m) = y[i];
        A(m, r) = y[i];
        b(r) = 1.0;
        for (std::size_t j = 0; j < n; ++j)
          if (state[j] == Bound::upper) b(r) -= y[i] * y[j] * K(i, j) * C;
      }
      for (std::size_t j = 0; j < n; ++j)
        if (state[j] == Bound::upper) b(m) -= y[j] * C;
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd x = lu.solve(b);
      if (!((A * x - b).cwiseAbs().maxCoeff() <= 1e-9)) return;

      double step = 1.0;
      std::size_t blocking = n;
      bool to_lower = false;
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t t = free_idx[r];
        const double d = x(r) - cur[t];
        const double limit = d < 0 ? cur[t] / -d : d > 0 ? (C - cur[t]) / d : 1.0;
        if (limit < step) {
          step = limit;
          blocking = t;
          to_lower = d < 0;
        }
      }
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t t = free_idx[r];
        cur[t] = std::clamp(cur[t] + step * (x(r) - cur[t]), 0.0, C);
      }
      if (blocking != n) {
        state[blocking] = to_lower ? Bound::lower : Bound::upper;
        cur[blocking] = to_lower ? 0.0 : C;
        continue;
      }
      nu = x(m);
      for (std::size_t i = 0; i < n; ++i) {
        grad[i] = -1.0;
        for (std::size_t j = 0; j < n; ++j)
          if (cur[j] != 0.0) grad[i] += y[i] * y[j] * K(i, j) * cur[j];
      }
    } else {
      // multiplier interval from the bound variables' sign conditions
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < n; ++t) {
        const double bound = -grad[t] * y[t];
        if ((state[t] == Bound::lower) == (y[t] > 0)) lo = std::max(lo, bound);
        else hi = std::min(hi, bound);
      }
      nu = std::isfinite(lo) && std::isfinite(hi) ? (lo + hi) / 2 : std::isfinite(lo) ? lo : hi;
      if (!std::isfinite(nu)) nu = 0.0;
    }

    constexpr double kKktSlack = 1e-12;
    double violation = kKktSlack;
    std::size_t release = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double g = grad[t] + nu * y[t];
      const double v = state[t] == Bound::lower ? -g : state[t] == Bound::upper ? g : 0.0;
      if (v > violation) {
        violation = v;
        release = t;
      }
    }
    if (release != n) {
      state[release] = Bound::free;
      continue;
    }
    if (objective_of(cur, grad) < objective_of(alpha, G)) return;
    alpha = std::move(cur);
    G = std::move(grad);
    return;
  }
}

}  // namespace

DualSolution solve_svm_dual(std::span<const double> kernel, std::span<const int> y, double C,
                            double tolerance, std::size_t max_iterations) {
  const std::size_t n = y.size();
  if (kernel.size() != n * n) throw DimensionError("kernel matrix is not n x n");
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  auto Q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * kernel[i * n + j]; };

  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> G(n, -1.0);
  auto& alpha = sol.alpha;

  for (;;) {
    // maximal violating pair
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * G[t];
      if (is_up(y[t], alpha[t], C) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (is_low(y[t], alpha[t], C) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    sol.max_violation = (i == n || j == n) ? 0.0 : gmax - gmin;
    if (i == n || j == n || gmax - gmin < tolerance) break;
    if (sol.iterations >= max_iterations) break;
    ++sol.iterations;

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const double qij = Q(i, j);
    if (y[i] != y[j]) {
      double quad = Q(i, i) + Q(j, j) + 2 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = Q(i, i) + Q(j, j) - 2 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = sum;
        }
      }
    }
    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t k = 0; k < n; ++k) G[k] += Q(i, k) * dai + Q(j, k) * daj;
  }
  polish_active_set(kernel, y, C, alpha, G);
  {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * G[t];
      if (is_up(y[t], alpha[t], C)) gmax = std::max(gmax, v);
      if (is_low(y[t], alpha[t], C)) gmin = std::min(gmin, v);
    }
    sol.max_violation = std::isfinite(gmax) && std::isfinite(gmin) ? std::max(0.0, gmax - gmin) : 0.0;
  }

  // bias from free vectors, or the midpoint of the feasible interval
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (alpha[t] >= C) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2;
  sol.bias = -rho;

  sol.objective = objective_of(alpha, G);
  return sol;
}

double SigmoidCalibration::operator()(double decision) const noexcept {
  const double z = A * decision + B;
  if (z >= 0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

SigmoidCalibration fit_sigmoid(std::span<const double> decisions, std::span<const int> y) {
  if (decisions.size() != y.size()) throw DimensionError("fit_sigmoid: length mismatch");
  const auto n = decisions.size();
  double pos = 0, neg = 0;
  for (int v : y) (v > 0 ? pos : neg) += 1;
  if (pos == 0 || neg == 0) throw InvalidArgument("fit_sigmoid needs both classes");

  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;
  constexpr double kEps = 1e-5;
  const double hi = (pos + 1.0) / (pos + 2.0);
  const double lo = 1.0 / (neg + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = y[i] > 0 ? hi : lo;

  auto objective = [&](double A, double B) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = decisions[i] * A + B;
      f += z >= 0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1) * z + std::log1p(std::exp(z));
    }
    return f;
  };

  double A = 0.0;
  double B = std::log((neg + 1.0) / (pos + 1.0));
  double fval = objective(A, B);
  for (int iter = 0; iter < kMaxIter; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0, g1 = 0, g2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = decisions[i] * A + B;
      double p, q;
      if (z >= 0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += decisions[i] * decisions[i] * d2;
      h22 += d2;
      h21 += decisions[i] * d2;
      const double d1 = t[i] - p;
      g1 += decisions[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;
    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;
    double step = 1.0;
    while (step >= kMinStep) {
      const double nA = A + step * dA;
      const double nB = B + step * dB;
      const double nf = objective(nA, nB);
      if (nf < fval + 1e-4 * step * gd) {
        A = nA;
        B = nB;
        fval = nf;
        break;
      }
      step /= 2;
    }
    if (step < kMinStep) break;
  }
  return {A, B};
}

TrainedDetector::TrainedDetector(Channel channel, std::size_t feature_dim, double gamma, double C,
                                 double bias, SigmoidCalibration calibration,
                                 std::vector<std::vector<double>> support_vectors,
                                 std::vector<double> dual_coefficients)
    : channel_(channel),
      feature_dim_(feature_dim),
      gamma_(gamma),
      C_(C),
      bias_(bias),
      calibration_(calibration),
      support_vectors_(std::move(support_vectors)),
      dual_coefficients_(std::move(dual_coefficients)) {
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) throw InvalidArgument("gamma must be positive");
  if (!(C_ > 0.0) || !std::isfinite(C_)) throw InvalidArgument("C must be positive");
  if (!std::isfinite(bias_) || !std::isfinite(calibration_.A) || !std::isfinite(calibration_.B))
    throw InvalidArgument("model parameters must be finite");
  if (support_vectors_.size() != dual_coefficients_.size())
    throw DimensionError("support vector and coefficient counts differ");
  for (const auto& sv : support_vectors_)
    if (sv.size() != feature_dim_) throw DimensionError("support vector has wrong dimension");
  for (double c : dual_coefficients_)
    if (!(std::abs(c) <= C_ * (1 + 1e-12))) throw InvalidArgument("|dual coefficient| exceeds C");
}

double TrainedDetector::decision(std::span<const double> x) const {
  if (x.size() != feature_dim_)
    throw DimensionError("feature has dim " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(feature_dim_));
  double f = bias_;
  for (std::size_t i = 0; i < support_vectors_.size(); ++i)
    f += dual_coefficients_[i] * rbf_kernel(support_vectors_[i], x, gamma_);
  return f;
}

double TrainedDetector::score(const FeatureVector& feature) const {
  if (feature.channel != channel_)
    throw InvalidArgument("feature channel " + std::string(to_string(feature.channel)) +
                          " does not match model channel " + std::string(to_string(channel_)));
  for (double v : feature.values)
    if (!std::isfinite(v)) throw InvalidArgument("feature contains a non-finite value");
  return calibration_(decision(feature.values));
}

TrainedDetector train(std::span<const LabeledFeature> samples, const SvmParams& params) {
  if (samples.empty()) throw InvalidArgument("no training samples");
  if (!(params.C > 0.0) || !std::isfinite(params.C)) throw InvalidArgument("C must be positive");
  const Channel channel = samples.front().feature.channel;
  const std::size_t dim = samples.front().feature.dim();
  if (dim == 0) throw DimensionError("empty feature vectors");
  bool has_pos = false, has_neg = false;
  for (const auto& s : samples) {
    if (s.feature.channel != channel) throw InvalidArgument("training samples mix channels");
    if (s.feature.dim() != dim) throw DimensionError("training features differ in dimension");
    for (double v : s.feature.values)
      if (!std::isfinite(v)) throw InvalidArgument("training feature is not finite");
    (s.label == Label::attack ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw InvalidArgument("training needs both bona fide and attack samples");

  const double gamma = resolve_gamma(samples, params.gamma);
  const std::size_t n = samples.size();
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = label_sign(samples[i].label);
  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    kernel[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = rbf_kernel(samples[i].feature.values, samples[j].feature.values, gamma);
      kernel[i * n + j] = k;
      kernel[j * n + i] = k;
    }
  }
  const auto sol = solve_svm_dual(kernel, y, params.C, params.tolerance, params.max_iterations);

  std::vector<std::vector<double>> svs;
  std::vector<double> coef;
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.alpha[i] > params.support_threshold) {
      svs.push_back(samples[i].feature.values);
      coef.push_back(sol.alpha[i] * y[i]);
    }
  }
  std::vector<double> decisions(n, sol.bias);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (sol.alpha[j] > params.support_threshold)
        decisions[i] += sol.alpha[j] * y[j] * kernel[i * n + j];
  const auto calibration = fit_sigmoid(decisions, y);
  return TrainedDetector(channel, dim, gamma, params.C, sol.bias, calibration, std::move(svs),
                         std::move(coef));
}

double training_accuracy(const TrainedDetector& model, std::span<const LabeledFeature> samples) {
  if (samples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    const double f = model.decision(s.feature.values);
    if ((f > 0) == (s.label == Label::attack)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

}  // namespace mpad
