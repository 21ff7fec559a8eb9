#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lanekit/decoder.hpp"
#include "lanekit/synth.hpp"

using namespace lanekit;

namespace {

LaneCurve vertical_line(double x, int y0, int y1, int id = 0) {
  LaneCurve c;
  c.id = id;
  for (int y = y0; y <= y1; ++y)
    c.points.push_back({x, static_cast<double>(y)});
  return c;
}

Plane row_plane(const std::vector<double>& row) {
  Plane p(static_cast<int>(row.size()), 1);
  p.data = row;
  return p;
}

double mean_abs_error(const DecodedLane& lane, const LaneCurve& truth) {
  double sum = 0.0;
  long n = 0;
  for (const ImagePoint& p : lane.points) {
    const auto tx = sample_x(truth, p.y);
    if (!tx) continue;
    sum += std::fabs(p.x - *tx);
    ++n;
  }
  return n > 0 ? sum / n : 0.0;
}

}  // namespace

TEST_CASE("row local maxima honor the threshold and the window") {
  DecoderConfig cfg;
  cfg.nms_window = 2;

  CHECK(row_local_maxima(row_plane({0, .2, .9, .2, 0}), 0, cfg) ==
        std::vector<int>{2});
  CHECK(row_local_maxima(row_plane({0, 0, 0, 0, 0}), 0, cfg).empty());

  std::vector<double> two(25, 0.0);
  two[3] = 0.9;
  two[20] = 0.9;
  CHECK(row_local_maxima(row_plane(two), 0, cfg) == std::vector<int>{3, 20});

  // a plateau emits its leftmost column
  CHECK(row_local_maxima(row_plane({0, .8, .8, .8, 0}), 0, cfg) ==
        std::vector<int>{1});

  CHECK_THROWS_AS(row_local_maxima(row_plane({0, 1, 0}), 2, cfg),
                  std::invalid_argument);
}

TEST_CASE("start row prefers the most maxima, then the bottom") {
  DecoderConfig cfg;
  cfg.dy = 2;
  cfg.nms_window = 1;

  Plane score(9, 8);
  // two maxima on row 4, one on row 2
  score.at(1, 2) = 0.9;
  score.at(1, 4) = 0.9;
  score.at(6, 4) = 0.9;
  const auto start = select_start_row(score, cfg);
  REQUIRE(start.has_value());
  CHECK(start->row == 4);
  CHECK(start->cols == std::vector<int>{1, 6});

  // equal counts tie toward the larger y
  Plane tie(9, 8);
  tie.at(3, 2) = 0.9;
  tie.at(3, 6) = 0.9;
  const auto tied = select_start_row(tie, cfg);
  REQUIRE(tied.has_value());
  CHECK(tied->row == 6);

  CHECK(!select_start_row(Plane(9, 8), cfg).has_value());
}

TEST_CASE("greedy decode walks an ideal vertical line end to end") {
  const ImageSpec spec{200, 600};
  const EncoderConfig enc;
  DecoderConfig cfg;
  const LogitMaps logits =
      render_ideal({vertical_line(100, 0, 599)}, spec, enc);
  const auto lanes = greedy_decode(logits, cfg);
  REQUIRE(lanes.size() == 1);
  CHECK(lanes[0].points.size() >= 58);
  CHECK(lanes[0].points.size() <= 61);
  for (const ImagePoint& p : lanes[0].points) {
    CHECK(std::fabs(p.x - 100.0) <= 0.5);
    CHECK(std::fmod(p.y, cfg.dy) == 0.0);
  }
  for (size_t i = 1; i < lanes[0].points.size(); ++i)
    CHECK(lanes[0].points[i].y - lanes[0].points[i - 1].y == cfg.dy);
  for (double s : lanes[0].scores) CHECK(s >= cfg.theta_h);
}

TEST_CASE("decoders return nothing on a blank heatmap") {
  LogitMaps blank{Plane(100, 100), Plane(100, 100), Plane(100, 100),
                  Plane(100, 100)};
  DecoderConfig cfg;
  CHECK(greedy_decode(blank, cfg).empty());
  CHECK(efficient_decode(blank, cfg).empty());
}

TEST_CASE("two parallel lines decode to two disjoint lanes") {
  const ImageSpec spec{300, 400};
  const EncoderConfig enc;
  DecoderConfig cfg;
  const LogitMaps logits = render_ideal(
      {vertical_line(100, 0, 399, 0), vertical_line(180, 0, 399, 1)}, spec,
      enc);
  const auto lanes = greedy_decode(logits, cfg);
  REQUIRE(lanes.size() == 2);
  CHECK(std::fabs(lanes[0].points.front().x - 100.0) <= 0.5);
  CHECK(std::fabs(lanes[1].points.front().x - 180.0) <= 0.5);
  for (const ImagePoint& a : lanes[0].points)
    for (const ImagePoint& b : lanes[1].points)
      CHECK((a.x != b.x || a.y != b.y));
}

TEST_CASE("efficient decode matches greedy on a clean scene") {
  const ImageSpec spec{300, 400};
  const EncoderConfig enc;
  DecoderConfig cfg;
  const LogitMaps logits = render_ideal(
      {vertical_line(100, 0, 399, 0), vertical_line(180, 0, 399, 1)}, spec,
      enc);
  const auto greedy = greedy_decode(logits, cfg);
  const auto efficient = efficient_decode(logits, cfg);
  REQUIRE(greedy.size() == efficient.size());
  for (size_t i = 0; i < greedy.size(); ++i) {
    for (const ImagePoint& gp : greedy[i].points)
      for (const ImagePoint& ep : efficient[i].points)
        if (gp.y == ep.y) CHECK(std::fabs(gp.x - ep.x) <= 1.0);
  }
}

TEST_CASE("an isolated keypoint cannot form a lane") {
  DecoderConfig cfg;
  LogitMaps logits{Plane(100, 100), Plane(100, 100), Plane(100, 100),
                   Plane(100, 100)};
  logits.score.at(50, 30) = 0.9;  // one bump on a grid row, nothing adjacent
  CHECK(efficient_decode(logits, cfg).empty());
  CHECK(greedy_decode(logits, cfg).empty());
}

TEST_CASE("decoding is deterministic") {
  SceneSpec scene;
  scene.image = {400, 300};
  scene.n_lanes = 3;
  scene.seed = 77;
  const EncoderConfig enc;
  DecoderConfig cfg;
  const auto curves = gen_scene(scene);
  const LogitMaps logits = render_ideal(curves, scene.image, enc);
  const auto a = greedy_decode(logits, cfg);
  const auto b = greedy_decode(logits, cfg);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].points.size() == b[i].points.size());
    for (size_t j = 0; j < a[i].points.size(); ++j) {
      CHECK(a[i].points[j].x == b[i].points[j].x);
      CHECK(a[i].points[j].y == b[i].points[j].y);
    }
  }
  const auto ea = efficient_decode(logits, cfg);
  const auto eb = efficient_decode(logits, cfg);
  REQUIRE(ea.size() == eb.size());
}

TEST_CASE("decoded points shift with a horizontal translation") {
  const ImageSpec spec{300, 200};
  const EncoderConfig enc;
  DecoderConfig cfg;
  const int k = 9;
  const LogitMaps base = render_ideal({vertical_line(120, 0, 199)}, spec, enc);
  LogitMaps moved{Plane(spec.width, spec.height),
                  Plane(spec.width, spec.height),
                  Plane(spec.width, spec.height),
                  Plane(spec.width, spec.height)};
  for (int y = 0; y < spec.height; ++y)
    for (int x = k; x < spec.width; ++x) {
      moved.score.at(x, y) = base.score.at(x - k, y);
      moved.off_up.at(x, y) = base.off_up.at(x - k, y);
      moved.off_mid.at(x, y) = base.off_mid.at(x - k, y);
      moved.off_down.at(x, y) = base.off_down.at(x - k, y);
    }
  const auto lanes0 = greedy_decode(base, cfg);
  const auto lanes1 = greedy_decode(moved, cfg);
  REQUIRE(lanes0.size() == 1);
  REQUIRE(lanes1.size() == 1);
  REQUIRE(lanes0[0].points.size() == lanes1[0].points.size());
  for (size_t i = 0; i < lanes0[0].points.size(); ++i) {
    CHECK(lanes1[0].points[i].x ==
          doctest::Approx(lanes0[0].points[i].x + k).epsilon(1e-9));
    CHECK(lanes1[0].points[i].y == lanes0[0].points[i].y);
  }
}

TEST_CASE("round trip over seeded scenes recovers count and geometry") {
  const EncoderConfig enc;
  DecoderConfig cfg;
  for (std::uint64_t seed : {11, 12, 13, 14, 15}) {
    SceneSpec scene;
    scene.image = {488, 295};
    scene.n_lanes = 1 + static_cast<int>(seed % 4);
    scene.family = static_cast<CurveFamily>(seed % 3);
    scene.seed = seed;
    const auto curves = gen_scene(scene);
    const LogitMaps logits = render_ideal(curves, scene.image, enc);
    for (const bool use_greedy : {true, false}) {
      const auto lanes = use_greedy ? greedy_decode(logits, cfg)
                                    : efficient_decode(logits, cfg);
      REQUIRE(lanes.size() == curves.size());
      for (size_t i = 0; i < lanes.size(); ++i)
        CHECK(mean_abs_error(lanes[i], curves[i]) < 1.0);
    }
  }
}

TEST_CASE("config invariants are enforced") {
  DecoderConfig cfg;
  cfg.theta_h = 1.5;
  LogitMaps blank{Plane(10, 10), Plane(10, 10), Plane(10, 10), Plane(10, 10)};
  CHECK_THROWS_AS(greedy_decode(blank, cfg), std::invalid_argument);
  cfg = DecoderConfig{};
  cfg.min_points = 1;
  CHECK_THROWS_AS(efficient_decode(blank, cfg), std::invalid_argument);
}
