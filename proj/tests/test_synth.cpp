#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mpad/corpus.hpp"
#include "mpad/error.hpp"
#include "mpad/manifest.hpp"
#include "mpad/mesh.hpp"
#include "mpad/text_format.hpp"
#include "mpad/warp.hpp"
#include "synthetic_face.hpp"
#include "synthetic_pool.hpp"
#include "temp_dir.hpp"

using namespace mpad;
using namespace mpad::testing;

namespace {

// Number of distinct vertices on the convex hull boundary, collinear ones included.
std::size_t boundary_vertex_count(const std::vector<Point2>& v) {
  const auto hull = convex_hull(v);
  std::size_t count = 0;
  for (const auto& p : v) {
    bool on = false;
    for (std::size_t i = 0; i < hull.size() && !on; ++i) {
      const Point2 a = hull[i], b = hull[(i + 1) % hull.size()];
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      const double dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
      const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
      on = std::abs(cross) <= 1e-9 && dot >= -1e-12 && dot <= len2 + 1e-12;
    }
    count += on;
  }
  return count;
}

// Direct determinant form of the circumcircle test, in long double.
bool strictly_inside_circumcircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  const long double adx = a.x - d.x, ady = a.y - d.y, bdx = b.x - d.x, bdy = b.y - d.y, cdx = c.x - d.x,
                    cdy = c.y - d.y;
  const long double det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) -
                          (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady) +
                          (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
  const long double orient = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return (orient > 0 ? det : -det) > 1e-6L;
}

void check_delaunay(const TriangleMesh& mesh) {
  for (const auto& t : mesh.triangles) {
    const Point2 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
    CHECK(std::abs(orient2d(a, b, c)) > 1e-9);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      if (static_cast<int>(v) == t[0] || static_cast<int>(v) == t[1] || static_cast<int>(v) == t[2]) continue;
      CHECK_FALSE(strictly_inside_circumcircle(a, b, c, mesh.vertices[v]));
    }
  }
}

double total_area(const TriangleMesh& mesh) {
  double area = 0.0;
  for (const auto& t : mesh.triangles)
    area += std::abs(orient2d(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]])) / 2;
  return area;
}

// Mean position of pixels darker than `level` inside a box.
Point2 dark_centroid(const RasterImage& img, Point2 center, int radius, int level) {
  double sx = 0, sy = 0, n = 0;
  for (int y = static_cast<int>(center.y) - radius; y <= static_cast<int>(center.y) + radius; ++y)
    for (int x = static_cast<int>(center.x) - radius; x <= static_cast<int>(center.x) + radius; ++x) {
      const auto p = img.rgb(x, y);
      if (p[0] + p[1] + p[2] < 3 * level) {
        sx += x;
        sy += y;
        n += 1;
      }
    }
  REQUIRE(n > 0);
  return {sx / n, sy / n};
}

LandmarkSet translated(const LandmarkSet& lm, Point2 d) {
  auto pts = lm.points();
  for (auto& p : pts) p = p + d;
  return LandmarkSet(pts);
}

bool point_in_convex(const std::vector<Point2>& hull, Point2 p) {
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 a = hull[i], b = hull[(i + 1) % hull.size()];
    if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < -1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("delaunay triangulation") {
  SUBCASE("rectangle corners only") {
    const auto mesh = delaunay_in_rectangle({}, 10, 5);
    CHECK(mesh.vertices.size() == 4);
    CHECK(mesh.triangles.size() == 2);
    CHECK(total_area(mesh) == doctest::Approx(50));
  }
  SUBCASE("face meshes satisfy the Euler count and the empty-circle property") {
    for (int subject = 0; subject < 6; ++subject) {
      const auto lm = face_landmarks(subject_params(subject, 0));
      const auto mesh = delaunay_mesh(lm, 224, 224);
      REQUIRE(mesh.vertices.size() == 76);
      for (std::size_t i = 0; i < 68; ++i) CHECK(mesh.vertices[i] == clamp_to_crop(lm, 224, 224)[i]);
      const std::size_t h = boundary_vertex_count(mesh.vertices);
      CHECK(mesh.triangles.size() == 2 * 76 - 2 - h);
      CHECK(total_area(mesh) == doctest::Approx(223.0 * 223.0));
      check_delaunay(mesh);
    }
  }
  SUBCASE("random point sets") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Point2> pts;
      for (int i = 0; i < 40; ++i) pts.push_back({u(rng) * 100, u(rng) * 60});
      if (trial % 4 == 0) pts.push_back({0.0, 30.0});  // on the border
      const auto mesh = delaunay_in_rectangle(pts, 100, 60);
      const std::size_t h = boundary_vertex_count(mesh.vertices);
      CHECK(mesh.triangles.size() == 2 * mesh.vertices.size() - 2 - h);
      CHECK(total_area(mesh) == doctest::Approx(6000));
      check_delaunay(mesh);
    }
  }
  SUBCASE("errors") {
    const std::vector<Point2> dup{{3, 3}, {5, 5}, {3, 3}};
    CHECK_THROWS_AS(delaunay_in_rectangle(dup, 10, 10), GeometryError);
    const std::vector<Point2> outside{{11, 3}};
    CHECK_THROWS_AS(delaunay_in_rectangle(outside, 10, 10), GeometryError);
    CHECK_THROWS_AS(delaunay_in_rectangle({}, 0, 10), GeometryError);
    auto pts = face_landmarks(subject_params(0, 0)).points();
    pts[5] = pts[6];
    CHECK_THROWS_AS(delaunay_mesh(LandmarkSet(pts), 224, 224), GeometryError);
  }
}

TEST_CASE("piecewise affine warp") {
  const auto params = subject_params(3, 0);
  const auto lm = face_landmarks(params);
  const auto img = render_face(224, 224, params);

  SUBCASE("identity") {
    const auto out = warp_to_target(img, lm, lm);
    CHECK(mean_abs_diff(out.image, img) < 1.0);
    for (std::size_t i = 0; i < kLandmarkCount; ++i) CHECK(out.landmarks[i] == lm[i]);
  }
  SUBCASE("translation moves interior features") {
    const auto target = translated(lm, {10, 0});
    const auto out = warp_to_target(img, lm, target);
    const std::span<const Point2> all(lm.points());
    for (auto eye : {centroid(all.subspan(36, 6)), centroid(all.subspan(42, 6))}) {
      const Point2 before = dark_centroid(img, eye, 8, 90);
      const Point2 after = dark_centroid(out.image, eye + Point2{10, 0}, 8, 90);
      CHECK(after.x - before.x == doctest::Approx(10.0).epsilon(0.05));
      CHECK(std::abs(after.y - before.y) < 0.5);
    }
  }
  SUBCASE("probe landmarks map onto target landmarks") {
    for (int subject = 0; subject < 5; ++subject) {
      const auto target = face_landmarks(subject_params(subject + 10, 1));
      const auto map = probe_to_target_map(lm, target, 224, 224);
      for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        const auto q = map(clamp_to_crop(lm, 224, 224)[i]);
        REQUIRE(q.has_value());
        CHECK(distance(*q, clamp_to_crop(target, 224, 224)[i]) <= 0.5);
      }
    }
  }
  SUBCASE("round trip") {
    for (int size : {64, 128, 224}) {
      const auto p = subject_params(2, 0, size, size);
      const auto t = subject_params(7, 1, size, size);
      const auto probe = render_face(size, size, p);
      const auto forward = warp_to_target(probe, face_landmarks(p), face_landmarks(t));
      const auto back = warp_to_target(forward.image, forward.landmarks, face_landmarks(p));
      CAPTURE(size);
      CHECK(mean_abs_diff(back.image, probe) < 4.0);
    }
  }
  SUBCASE("intensity") {
    const auto target = translated(lm, {6, -4});
    const auto half = interpolate_landmarks(lm, target, 0.5);
    CHECK(half[30].x == doctest::Approx(lm[30].x + 3));
    CHECK(half[30].y == doctest::Approx(lm[30].y - 2));
    CHECK(warp_to_target(img, lm, target, 0.0).image == warp_to_target(img, lm, lm).image);
  }
  SUBCASE("degenerate meshes are rejected") {
    auto pts = lm.points();
    for (std::size_t i = 36; i < 48; ++i) pts[i] = pts[36] + Point2{1e-12 * static_cast<double>(i), 0};
    CHECK_THROWS(warp_to_target(img, lm, LandmarkSet(pts)));
  }
}

TEST_CASE("region masks") {
  const auto lm = face_landmarks(subject_params(1, 0));
  const auto map = face_region_map(lm, 224, 224);
  std::vector<Point2> face_pts(lm.points().begin(), lm.points().begin() + 27);
  const auto hull = convex_hull(face_pts);
  std::map<FaceRegion, int> counts;
  for (int y = 0; y < 224; ++y)
    for (int x = 0; x < 224; ++x) {
      const auto r = map[static_cast<std::size_t>(y) * 224 + x];
      ++counts[r];
      if (r != FaceRegion::none) CHECK(point_in_convex(hull, {double(x), double(y)}));
    }
  for (auto r : {FaceRegion::skin, FaceRegion::left_eye, FaceRegion::right_eye, FaceRegion::lips})
    CHECK(counts[r] > 20);
  // lip pixels sit inside the lip hull
  const auto lip_hull = convex_hull(std::vector<Point2>(lm.points().begin() + 48, lm.points().end()));
  for (int y = 0; y < 224; ++y)
    for (int x = 0; x < 224; ++x)
      if (map[static_cast<std::size_t>(y) * 224 + x] == FaceRegion::lips)
        CHECK(point_in_convex(lip_hull, {double(x), double(y)}));
}

TEST_CASE("makeup color transfer") {
  const auto params = subject_params(4, 0);
  const auto lm = face_landmarks(params);
  const auto img = render_face(224, 224, params);

  SUBCASE("self transfer") {
    const auto out = makeup_color_transfer(img, lm, img, lm);
    for (std::size_t i = 0; i < img.pixels().size(); ++i)
      CHECK(std::abs(int(out.pixels()[i]) - int(img.pixels()[i])) <= 1);
  }
  SUBCASE("constant lip color") {
    const auto tparams = subject_params(9, 0);
    const auto tlm = face_landmarks(tparams);
    auto target = render_face(224, 224, tparams);
    const auto tmap = face_region_map(tlm, 224, 224);
    const Rgb lip{180, 40, 90};
    for (int y = 0; y < 224; ++y)
      for (int x = 0; x < 224; ++x)
        if (tmap[static_cast<std::size_t>(y) * 224 + x] == FaceRegion::lips) target.set(x, y, lip);
    const auto out = makeup_color_transfer(img, lm, target, tlm);
    const auto pmap = face_region_map(lm, 224, 224);
    double sum[3] = {0, 0, 0};
    double n = 0;
    for (int y = 0; y < 224; ++y)
      for (int x = 0; x < 224; ++x)
        if (pmap[static_cast<std::size_t>(y) * 224 + x] == FaceRegion::lips) {
          for (int c = 0; c < 3; ++c) sum[c] += out.rgb(x, y)[c];
          n += 1;
        }
    for (int c = 0; c < 3; ++c) CHECK(std::abs(sum[c] / n - lip[c]) <= 1.0);
  }
  SUBCASE("pixels outside the regions are untouched") {
    const auto tparams = subject_params(8, 1);
    const auto out = makeup_color_transfer(img, lm, render_face(224, 224, tparams), face_landmarks(tparams));
    const auto map = face_region_map(lm, 224, 224);
    std::size_t changed_inside = 0;
    for (int y = 0; y < 224; ++y)
      for (int x = 0; x < 224; ++x) {
        if (map[static_cast<std::size_t>(y) * 224 + x] == FaceRegion::none) CHECK(out.rgb(x, y) == img.rgb(x, y));
        else changed_inside += out.rgb(x, y) != img.rgb(x, y);
      }
    CHECK(changed_inside > 1000);
  }
  SUBCASE("degenerate landmarks") {
    LandmarkSet::Points pts;
    pts.fill({50, 50});
    CHECK_THROWS_AS(makeup_color_transfer(img, LandmarkSet(pts), img, lm), GeometryError);
  }
}

TEST_CASE("quality gates") {
  const auto lm = face_landmarks(FaceParams{});
  auto report = quality_gate(lm);
  CHECK(report.passed());
  CHECK(report.yaw_asymmetry < 1e-9);
  CHECK(report.lip_gap == doctest::Approx(0.04));

  SUBCASE("open mouth") {
    FaceParams open;
    open.lip_gap = 0.2;
    report = quality_gate(face_landmarks(open));
    CHECK(report.lip_gap == doctest::Approx(0.2));
    CHECK_FALSE(report.mouth_closed);
    CHECK(report.frontal_pose);
    CHECK_FALSE(report.passed());
  }
  SUBCASE("turned head") {
    // slide the nose tip sideways until the asymmetry ratio reaches 0.5
    auto asym = [&](double dx) {
      const Point2 nose = lm[33] + Point2{dx, 0};
      return std::abs(distance(nose, lm[0]) - distance(nose, lm[16])) / inter_ocular_distance(lm);
    };
    double lo = 0, hi = 60;
    for (int i = 0; i < 100; ++i) (asym((lo + hi) / 2) < 0.5 ? lo : hi) = (lo + hi) / 2;
    auto pts = lm.points();
    pts[33] = pts[33] + Point2{lo, 0};
    report = quality_gate(LandmarkSet(pts));
    CHECK(report.yaw_asymmetry == doctest::Approx(0.5));
    CHECK_FALSE(report.frontal_pose);
    CHECK(report.mouth_closed);
  }
  SUBCASE("landmark outside the box") {
    auto pts = lm.points();
    pts[8] = pts[8] + Point2{0, 4 * inter_ocular_distance(lm)};
    report = quality_gate(LandmarkSet(pts));
    CHECK_FALSE(report.landmark_sanity);
  }
  SUBCASE("coincident eyes fail every gate") {
    LandmarkSet::Points pts;
    pts.fill({1, 1});
    report = quality_gate(LandmarkSet(pts));
    CHECK_FALSE(report.frontal_pose);
    CHECK_FALSE(report.mouth_closed);
    CHECK_FALSE(report.landmark_sanity);
  }
}

TEST_CASE("attack pairing") {
  std::vector<std::string> targets, probes;
  for (int i = 0; i < 641; ++i) targets.push_back("s" + std::to_string(i));
  for (int i = 0; i < 100; ++i) probes.push_back("s" + std::to_string(i * 7));  // some overlap
  const auto plan = plan_attack_pairs(targets, probes, 3290, 17);
  std::size_t overlapping = 0;
  for (const auto& p : probes) overlapping += std::find(targets.begin(), targets.end(), p) != targets.end();
  CHECK(plan.available == 641 * 100 - overlapping);
  CHECK_FALSE(plan.with_replacement);
  REQUIRE(plan.pairs.size() == 3290);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& p : plan.pairs) {
    CHECK(targets[p.target] != probes[p.probe]);
    seen.insert({p.target, p.probe});
  }
  CHECK(seen.size() == 3290);
  CHECK(plan_attack_pairs(targets, probes, 3290, 17).pairs == plan.pairs);
  CHECK(plan_attack_pairs(targets, probes, 3290, 18).pairs != plan.pairs);

  const std::vector<std::string> small_t{"a", "b"}, small_p{"a", "c"};
  const auto rep = plan_attack_pairs(small_t, small_p, 10, 1);
  CHECK(rep.available == 3);
  CHECK(rep.with_replacement);
  CHECK(rep.pairs.size() == 10);
  for (const auto& p : rep.pairs) CHECK(small_t[p.target] != small_p[p.probe]);

  const std::vector<std::string> same{"a"};
  CHECK_THROWS_AS(plan_attack_pairs(same, same, 1, 1), InvalidArgument);
  CHECK(plan_attack_pairs(same, same, 0, 1).pairs.empty());

  std::mt19937_64 rng(5);
  for (std::uint64_t n : {1u, 2u, 3u, 7u, 1000u}) {
    const auto v = uniform_below(rng, n);
    CHECK(v < n);
  }
}

TEST_CASE("bona fide pairing") {
  const std::vector<std::string> subjects{"a", "b", "a", "c", "a", "b"};
  const auto pairs = plan_bona_fide_pairs(subjects);
  const std::vector<CrossPair> expected{{0, 2}, {0, 4}, {1, 5}};
  CHECK(pairs == expected);
}

TEST_CASE("corpus generation") {
  TempDir dir;
  const auto targets = write_synthetic_pool(dir / "targets", {"t", 0, 3, 1, 112, 112, true});
  const auto probes = write_synthetic_pool(dir / "probes", {"p", 20, 3, 2, 112, 112, false});
  SynthesisConfig config;
  config.crop.width = 112;
  config.crop.height = 112;
  config.seed = 4;

  SUBCASE("count 0 gives only bona fide rows") {
    const auto summary = generate_corpus(targets, probes, dir / "out0", config);
    CHECK(summary.attacks == 0);
    CHECK(summary.bona_fide == 3);
    const auto manifest = load_manifest(dir / "out0" / "manifest.csv");
    REQUIRE(manifest.size() == 3);
    for (const auto& r : manifest) CHECK(r.label == Label::bona_fide);
  }
  SUBCASE("attacks are written and deterministic") {
    config.count = 4;
    const auto a = generate_corpus(targets, probes, dir / "a", config);
    const auto b = generate_corpus(targets, probes, dir / "b", config);
    CHECK(a.attacks == 4);
    CHECK(a.targets.passed == 3);
    CHECK(a.probes.passed == 6);
    CHECK(slurp(dir / "a" / "manifest.csv") == slurp(dir / "b" / "manifest.csv"));
    const auto manifest = load_manifest(dir / "a" / "manifest.csv");
    std::size_t attacks = 0;
    for (const auto& r : manifest) {
      if (r.label != Label::attack) continue;
      ++attacks;
      const auto manifest_path = dir / "a" / "manifest.csv";
      const auto name = std::filesystem::path(*r.probe.image).filename();
      CHECK(slurp(dir / "a" / "images" / name) == slurp(dir / "b" / "images" / name));
      const auto img = read_ppm(resolve_input(manifest_path, *r.probe.image));
      CHECK(img.width() == 112);
      CHECK(quality_gate(load_landmarks(resolve_input(manifest_path, *r.probe.landmarks))).passed());
    }
    CHECK(attacks == 4);
    const auto sources = read_lines(dir / "a" / "attack_sources.csv");
    REQUIRE(sources.size() == 5);
    CHECK(sources[0] == kAttackSourcesHeader);
    for (std::size_t i = 1; i < sources.size(); ++i) {
      const auto cells = split(sources[i], ',');
      CHECK(cells[0] == "synth_attack_" + std::string(i - 1 < 10 ? "0000" : "000") + std::to_string(i - 1));
      CHECK(cells[1].front() == 't');
      CHECK(cells[2].front() == 'p');
    }
    const auto text = slurp(dir / "a" / "manifest.csv");
    CHECK(text.find("# seed=4") != std::string::npos);
    CHECK(text.find("# replacement=false") != std::string::npos);
  }
  SUBCASE("empty pools") {
    CHECK_THROWS_AS(generate_corpus({}, probes, dir / "x", config), InvalidArgument);
    CHECK_THROWS_AS(generate_corpus(targets, {}, dir / "x", config), InvalidArgument);
  }
  SUBCASE("pool file") {
    const auto loaded = load_pool(dir / "probes" / "pool.csv");
    REQUIRE(loaded.size() == probes.size());
    CHECK(loaded[1].subject_id == "p20");
    CHECK(loaded[1].image == probes[1].image);
    CHECK_FALSE(loaded[1].embedding.has_value());
  }
}
