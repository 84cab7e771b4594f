#include <doctest.h>

#include <numeric>
#include <random>

#include "mpad/error.hpp"
#include "mpad/features.hpp"
#include "synthetic_face.hpp"

using namespace mpad;
using namespace mpad::testing;

namespace {

Embedding random_embedding(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> v(dim);
  for (auto& x : v) x = nd(rng);
  return Embedding(v);
}

// Independent reading of the bit rule: neighbour offsets listed as (row, col).
int reference_lbp(const int grid[3][3]) {
  const int offsets[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}};
  int code = 0;
  for (int b = 0; b < 8; ++b)
    if (grid[1 + offsets[b][0]][1 + offsets[b][1]] >= grid[1][1]) code += 1 << b;
  return code;
}

Patch3x3 to_patch(const int grid[3][3]) {
  Patch3x3 p;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) p[r * 3 + c] = static_cast<std::uint8_t>(grid[r][c]);
  return p;
}

AlignedFace as_aligned(RasterImage img) { return {std::move(img), Affine2{}}; }

}  // namespace

TEST_CASE("embedding difference") {
  SUBCASE("v - v is zero") {
    std::mt19937_64 rng(1);
    const auto v = random_embedding(rng, 512);
    for (bool norm : {false, true}) {
      const auto d = embedding_difference(v, v, norm);
      CHECK(d.channel == Channel::embedding_diff);
      CHECK(d.dim() == 512);
      for (double x : d.values) CHECK(x == 0.0);
    }
  }
  SUBCASE("direct arithmetic") {
    const auto d = embedding_difference(Embedding({1, 2, 3}), Embedding({0, 2, 5}), false);
    CHECK(d.values == std::vector<double>{1, 0, -2});
  }
  SUBCASE("normalization scales inputs to unit norm, zero vectors untouched") {
    const auto d = embedding_difference(Embedding({3, 4}), Embedding({0, 0}), true);
    CHECK(d.values[0] == doctest::Approx(0.6));
    CHECK(d.values[1] == doctest::Approx(0.8));
  }
  SUBCASE("antisymmetry") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
      const auto a = random_embedding(rng, 64), b = random_embedding(rng, 64);
      const bool norm = t % 2;
      const auto ab = embedding_difference(a, b, norm), ba = embedding_difference(b, a, norm);
      for (std::size_t i = 0; i < 64; ++i) CHECK(ab.values[i] + ba.values[i] == 0.0);
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(embedding_difference(Embedding({1, 2}), Embedding({1, 2, 3}), false), DimensionError);
  }
}

TEST_CASE("landmark difference") {
  const auto ref = face_landmarks(subject_params(1, 0));
  SUBCASE("identical sets give zeros") {
    const auto d = landmark_difference(ref, ref);
    CHECK(d.dim() == kLandmarkDiffDim);
    for (double x : d.values) CHECK(x == 0.0);
  }
  SUBCASE("scaling about the eye midpoint is removed") {
    const auto eyes = eye_centers(ref);
    const Point2 mid = 0.5 * (eyes.left + eyes.right);
    LandmarkSet::Points scaled;
    for (std::size_t i = 0; i < kLandmarkCount; ++i) scaled[i] = mid + 2.0 * (ref[i] - mid);
    const auto d = landmark_difference(ref, LandmarkSet(scaled));
    for (double x : d.values) CHECK(std::abs(x) < 1e-12);
  }
  SUBCASE("moving lip point 51 touches indices 51 and 119 only") {
    auto pts = ref.points();
    pts[51] = pts[51] + Point2{1.5, -2.0};
    const auto d = landmark_difference(ref, LandmarkSet(pts));
    for (std::size_t i = 0; i < d.dim(); ++i) {
      if (i == 51 || i == 119) CHECK(d.values[i] != 0.0);
      else CHECK(d.values[i] == 0.0);
    }
  }
  SUBCASE("invariant under independent similarity transforms") {
    FaceParams moved = subject_params(1, 0);
    moved.iod *= 1.7;
    moved.angle += 0.4;
    moved.eye_mid = moved.eye_mid + Point2{13, -7};
    const auto probe = face_landmarks(subject_params(2, 0));
    const auto a = landmark_difference(ref, probe);
    const auto b = landmark_difference(face_landmarks(moved), probe);
    for (std::size_t i = 0; i < a.dim(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-9);
  }
}

TEST_CASE("lbp code conventions") {
  const int uniform[3][3] = {{7, 7, 7}, {7, 7, 7}, {7, 7, 7}};
  CHECK(lbp_code(to_patch(uniform)) == 255);
  const int peak[3][3] = {{1, 2, 3}, {4, 9, 5}, {6, 7, 8}};
  CHECK(lbp_code(to_patch(peak)) == 0);
  // neighbours in bit order: 6, 2, 8, 3, 7, 1, 9, 4
  const int mixed[3][3] = {{6, 2, 8}, {4, 5, 3}, {9, 1, 7}};
  CHECK(reference_lbp(mixed) == 85);
  CHECK(lbp_code(to_patch(mixed)) == 85);

  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(0, 255);
  for (int t = 0; t < 2000; ++t) {
    int g[3][3];
    for (auto& row : g)
      for (auto& v : row) v = u(rng) % (t % 2 ? 4 : 256);  // many ties on odd trials
    CHECK(lbp_code(to_patch(g)) == reference_lbp(g));
  }
}

TEST_CASE("grayscale uses rounded luma weights") {
  RasterImage img(2, 1);
  img.set(0, 0, {255, 255, 255});
  img.set(1, 0, {10, 20, 30});
  const auto g = to_grayscale(img);
  CHECK(g.at(0, 0) == 255);
  CHECK(g.at(1, 0) == 18);  // 2.99 + 11.74 + 3.42 = 18.15
}

TEST_CASE("lbp grid features") {
  SUBCASE("constant image puts all mass in bin 255") {
    const RasterImage img(224, 224, Rgb{90, 90, 90});
    const auto f = lbp_grid_features(as_aligned(img), as_aligned(img));
    REQUIRE(f.dim() == 2 * kLbpImageDim);
    for (std::size_t cell = 0; cell < 32; ++cell)
      for (std::size_t bin = 0; bin < 256; ++bin)
        CHECK(f.values[cell * 256 + bin] == (bin == 255 ? 54.0 * 54.0 : 0.0));
  }
  SUBCASE("per-cell mass") {
    const auto img = smooth_pattern(64, 48, 0.2);
    const auto h = lbp_histograms(to_grayscale(img));
    for (std::size_t cell = 0; cell < 16; ++cell) {
      const double mass = std::accumulate(h.begin() + cell * 256, h.begin() + (cell + 1) * 256, 0.0);
      CHECK(mass == (16 - 2) * (12 - 2));
    }
  }
  SUBCASE("additive shift without clipping leaves features unchanged") {
    const auto img = render_face(224, 224, subject_params(4, 0));
    RasterImage shifted = img;
    bool clipped = false;
    for (auto& v : shifted.pixels()) {
      if (v > 245) clipped = true;
      v = static_cast<std::uint8_t>(std::min(255, v + 10));
    }
    REQUIRE_FALSE(clipped);
    const auto a = lbp_grid_features(as_aligned(img), as_aligned(img));
    const auto b = lbp_grid_features(as_aligned(shifted), as_aligned(shifted));
    CHECK(a.values == b.values);
  }
  SUBCASE("reference histograms come first") {
    const auto ref = smooth_pattern(32, 32, 0.0);
    const RasterImage probe(32, 32, Rgb{5, 5, 5});
    const auto f = lbp_grid_features(as_aligned(ref), as_aligned(probe));
    const auto ref_hist = lbp_histograms(to_grayscale(ref));
    CHECK(std::equal(ref_hist.begin(), ref_hist.end(), f.values.begin()));
    CHECK(f.values[kLbpImageDim + 255] == 36.0);
  }
  SUBCASE("size mismatch and indivisible sizes") {
    CHECK_THROWS_AS(lbp_grid_features(as_aligned(RasterImage(32, 32)), as_aligned(RasterImage(36, 32))),
                    DimensionError);
    CHECK_THROWS_AS(lbp_histograms(to_grayscale(RasterImage(30, 32))), DimensionError);
  }
}

TEST_CASE("probe-only feature copies the embedding") {
  CHECK(probe_only_feature(Embedding(std::vector<double>(8, 0.0))).values == std::vector<double>(8, 0.0));
  std::vector<double> e3(16, 0.0);
  e3[3] = 1.0;
  const auto f = probe_only_feature(Embedding(e3));
  CHECK(f.channel == Channel::probe_only);
  CHECK(f.values == e3);
  for (std::size_t dim : {1u, 128u, 512u})
    CHECK(probe_only_feature(Embedding(std::vector<double>(dim, 0.5))).dim() == dim);
}

TEST_CASE("channel dimensions") {
  CHECK(channel_dim(Channel::embedding_diff, 512) == 512);
  CHECK(channel_dim(Channel::probe_only, 128) == 128);
  CHECK(channel_dim(Channel::landmark_diff, 512) == 136);
  CHECK(channel_dim(Channel::lbp_grid, 512) == 8192);
  for (auto c : {Channel::embedding_diff, Channel::landmark_diff, Channel::lbp_grid, Channel::probe_only})
    CHECK(parse_channel(to_string(c)) == c);
  CHECK_FALSE(parse_channel("depth").has_value());
}
