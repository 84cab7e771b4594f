#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "mpad/error.hpp"
#include "mpad/svm.hpp"
#include "qp_oracle.hpp"
#include "svm_problems.hpp"
#include "temp_dir.hpp"

using namespace mpad;
using namespace mpad::testing;

namespace {

LabeledFeature sample(std::vector<double> v, Label label) {
  return {FeatureVector{Channel::embedding_diff, std::move(v)}, label};
}

std::vector<LabeledFeature> blobs(std::mt19937_64& rng, int per_class) {
  std::normal_distribution<double> nd(0.0, 0.1);
  std::vector<LabeledFeature> out;
  for (int i = 0; i < per_class; ++i) {
    out.push_back(sample({-2 + nd(rng), nd(rng)}, Label::bona_fide));
    out.push_back(sample({2 + nd(rng), nd(rng)}, Label::attack));
  }
  return out;
}

SmallSvmProblem as_problem(const std::vector<LabeledFeature>& s, double C, double gamma) {
  SmallSvmProblem p;
  p.C = C;
  p.gamma = gamma;
  for (const auto& f : s) {
    p.x.push_back(f.feature.values);
    p.y.push_back(label_sign(f.label));
  }
  return p;
}

}  // namespace

TEST_CASE("rbf kernel") {
  const std::vector<double> a{0.3, -1.2}, b{1.0, 0.5};
  CHECK(rbf_kernel(a, a, 2.0) == 1.0);
  CHECK(rbf_kernel(std::vector<double>{0}, std::vector<double>{1}, 1.0) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(rbf_kernel(a, b, 0.7) == rbf_kernel(b, a, 0.7));
  CHECK_THROWS_AS(rbf_kernel(a, std::vector<double>{1}, 1.0), DimensionError);
}

TEST_CASE("two-point problem") {
  const std::vector<LabeledFeature> s{sample({0}, Label::bona_fide), sample({2}, Label::attack)};
  SvmParams params;
  params.C = 10;
  params.gamma = GammaSetting::fixed(0.5);
  const auto model = train(s, params);
  // closed form: alpha = 2 / (K11 + K22 - 2 K12) with K12 = e^-2
  const double alpha = 2.0 / (2.0 - 2.0 * std::exp(-2.0));
  REQUIRE(model.dual_coefficients().size() == 2);
  CHECK(model.dual_coefficients()[0] == doctest::Approx(-alpha).epsilon(1e-9));
  CHECK(model.dual_coefficients()[1] == doctest::Approx(alpha).epsilon(1e-9));
  CHECK(std::abs(model.decision(std::vector<double>{1.0})) < 1e-9);
  CHECK(model.decision(std::vector<double>{0.0}) == doctest::Approx(-1.0));
  CHECK(model.decision(std::vector<double>{2.0}) == doctest::Approx(1.0));

  const auto oracle = brute_force_svm_dual(as_problem(s, 10, 0.5).kernel_rows(), {-1, 1}, 10);
  CHECK(oracle.alpha[0] == doctest::Approx(alpha).epsilon(1e-9));

  const double at_mid = model.score({Channel::embedding_diff, {1.0}});
  const double expected = 1.0 / (1.0 + std::exp(model.calibration().B + model.calibration().A * model.decision(std::vector<double>{1.0})));
  CHECK(at_mid == doctest::Approx(expected).epsilon(1e-12));
  CHECK(model.calibration().A < 0);
}

TEST_CASE("xor set") {
  const std::vector<LabeledFeature> s{sample({0, 0}, Label::bona_fide), sample({1, 1}, Label::bona_fide),
                                      sample({0, 1}, Label::attack), sample({1, 0}, Label::attack)};
  SvmParams params;
  params.C = 10;
  params.gamma = GammaSetting::fixed(1.0);
  const auto model = train(s, params);
  CHECK(model.support_vectors().size() == 4);
  CHECK(training_accuracy(model, s) == 1.0);
  const auto oracle = brute_force_svm_dual(as_problem(s, 10, 1).kernel_rows(), {-1, -1, 1, 1}, 10);
  for (std::size_t i = 0; i < 4; ++i) CHECK(oracle.alpha[i] > 0);
}

TEST_CASE("separable blobs") {
  std::mt19937_64 rng(5);
  const auto s = blobs(rng, 20);
  const auto model = train(s);
  CHECK(training_accuracy(model, s) == 1.0);

  const std::vector<LabeledFeature> sub(s.begin(), s.begin() + 8);
  const auto p = as_problem(sub, 1.0, resolve_gamma(sub, GammaSetting::scale()));
  const auto smo = solve_svm_dual(p.kernel_flat(), p.y, p.C, 1e-3);
  const auto oracle = brute_force_svm_dual(p.kernel_rows(), p.y, p.C);
  CHECK(std::abs(smo.objective - oracle.objective) <= 1e-6);
}

TEST_CASE("solver agrees with the exhaustive oracle on small problems") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_svm_problem(rng);
    const auto smo = solve_svm_dual(p.kernel_flat(), p.y, p.C, 1e-3);
    const auto oracle = brute_force_svm_dual(p.kernel_rows(), p.y, p.C);
    CAPTURE(trial);
    CHECK(std::abs(smo.objective - oracle.objective) <= 1e-6);
    CHECK(std::abs(smo.objective - dual_objective(p.kernel_rows(), p.y, smo.alpha)) <= 1e-9);
    double balance = 0.0;
    for (std::size_t i = 0; i < p.y.size(); ++i) {
      CHECK(smo.alpha[i] >= 0.0);
      CHECK(smo.alpha[i] <= p.C);
      balance += smo.alpha[i] * p.y[i];
      if (smo.alpha[i] > 1e-8 && smo.alpha[i] < p.C - 1e-8)
        CHECK(std::abs(p.y[i] * p.decision(smo.alpha, smo.bias, p.x[i]) - 1.0) <= 1e-2);
    }
    CHECK(std::abs(balance) <= 1e-9);
    for (const auto& q : probe_grid(p.x[0].size()))
      CHECK((p.decision(smo.alpha, smo.bias, q) > 0) == (p.decision(oracle.alpha, oracle.bias, q) > 0));
  }
}

TEST_CASE("trained model invariants") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<LabeledFeature> s;
  for (int i = 0; i < 60; ++i) {
    const bool attack = i % 2;
    s.push_back(sample({nd(rng) + (attack ? 0.8 : 0.0), nd(rng), nd(rng)}, attack ? Label::attack : Label::bona_fide));
  }
  const auto model = train(s);
  const auto& coef = model.dual_coefficients();
  CHECK(std::abs(std::accumulate(coef.begin(), coef.end(), 0.0)) <= 1e-6);
  for (double c : coef) CHECK(std::abs(c) <= model.C());
  CHECK(model.calibration().A < 0);
  double prev = -1.0;
  for (double f = -5; f <= 5; f += 0.25) {
    const double p = model.calibration()(f);
    CHECK(p > prev);
    prev = p;
  }
  for (int i = 0; i < 50; ++i) {
    const double sc = model.score({Channel::embedding_diff, {nd(rng) * 10, nd(rng), nd(rng)}});
    CHECK(sc >= 0.0);
    CHECK(sc <= 1.0);
  }
  // deterministic
  const auto again = train(s);
  CHECK(again.dual_coefficients() == coef);
  CHECK(again.bias() == model.bias());
}

TEST_CASE("gamma scale") {
  const std::vector<LabeledFeature> s{sample({0, 2}, Label::bona_fide), sample({4, 2}, Label::attack)};
  // values 0,2,4,2: mean 2, population variance 2
  CHECK(resolve_gamma(s, GammaSetting::scale()) == doctest::Approx(1.0 / (2 * 2.0)));
  const std::vector<LabeledFeature> flat{sample({1, 1}, Label::bona_fide), sample({1, 1}, Label::attack)};
  CHECK(resolve_gamma(flat, GammaSetting::scale()) == 1.0);
  CHECK_THROWS_AS(resolve_gamma(s, GammaSetting::fixed(0.0)), InvalidArgument);
}

TEST_CASE("training input errors") {
  CHECK_THROWS_AS(train(std::vector<LabeledFeature>{sample({0}, Label::attack), sample({1}, Label::attack)}),
                  InvalidArgument);
  CHECK_THROWS_AS(train(std::vector<LabeledFeature>{sample({0}, Label::bona_fide), sample({NAN}, Label::attack)}),
                  InvalidArgument);
  CHECK_THROWS_AS(train(std::vector<LabeledFeature>{sample({0}, Label::bona_fide), sample({1, 2}, Label::attack)}),
                  DimensionError);
  const auto model = train(std::vector<LabeledFeature>{sample({0}, Label::bona_fide), sample({1}, Label::attack)});
  CHECK_THROWS_AS(model.score({Channel::probe_only, {0.5}}), InvalidArgument);
  CHECK_THROWS_AS(model.score({Channel::embedding_diff, {0.5, 1}}), DimensionError);
}

TEST_CASE("model persistence") {
  TempDir dir;
  std::mt19937_64 rng(3);
  const auto s = blobs(rng, 10);
  const auto model = train(s);
  const auto path = dir.path() / "model.json";
  save_model(model, path);
  const auto loaded = load_model(path);
  CHECK(loaded.channel() == model.channel());
  CHECK(loaded.gamma() == model.gamma());
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const FeatureVector f{Channel::embedding_diff, {u(rng), u(rng)}};
    CHECK(std::abs(loaded.score(f) - model.score(f)) <= 1e-12);
  }

  SUBCASE("corrupted file") {
    auto text = slurp(path);
    text.resize(text.size() / 2);
    std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
    CHECK_THROWS_AS(load_model(path), ParseError);
  }
  SUBCASE("version mismatch") {
    auto text = slurp(path);
    const auto at = text.find("\"version\": 1");
    REQUIRE(at != std::string::npos);
    text.replace(at, 12, "\"version\": 7");
    std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
    CHECK_THROWS_AS(load_model(path), ParseError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_model(dir.path() / "none.json"), IoError); }
  SUBCASE("no support vectors") {
    const TrainedDetector empty(Channel::embedding_diff, 2, 1.0, 1.0, 0.0, {}, {}, {});
    CHECK_THROWS_AS(save_model(empty, dir.path() / "empty.json"), InvalidArgument);
  }
}
