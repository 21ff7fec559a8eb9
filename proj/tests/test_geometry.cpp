#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lanekit/geometry.hpp"
#include "lanekit/rng.hpp"

using namespace lanekit;

namespace {

LaneCurve make_curve(std::initializer_list<ImagePoint> pts, int id = 0) {
  LaneCurve c;
  c.points = pts;
  c.id = id;
  return c;
}

}  // namespace

TEST_CASE("densify interpolates every integer row") {
  const LaneCurve d = densify(make_curve({{100, 190}, {110, 200}}));
  REQUIRE(d.points.size() == 11);
  CHECK(d.points[5].x == doctest::Approx(105.0));
  CHECK(d.points[5].y == 195.0);

  const LaneCurve v = densify(make_curve({{100, 190}, {100, 200}}));
  REQUIRE(v.points.size() == 11);
  for (const ImagePoint& p : v.points) CHECK(p.x == 100.0);

  const LaneCurve diag = densify(make_curve({{0, 0}, {30, 30}}));
  CHECK(diag.points[10].x == doctest::Approx(10.0));
  CHECK(diag.points[10].y == 10.0);
}

TEST_CASE("densify rejects bad curves") {
  CHECK_THROWS_AS(densify(make_curve({{0, 0}})), std::invalid_argument);
  CHECK_THROWS_AS(densify(make_curve({{0, 10}, {5, 5}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(densify(make_curve({{0, 5}, {5, 5}})),
                  std::invalid_argument);
  // fewer than two integer rows in the span
  CHECK_THROWS_AS(densify(make_curve({{0, 10.2}, {5, 10.8}})),
                  std::invalid_argument);
}

TEST_CASE("densify is idempotent") {
  PortableRng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    LaneCurve c;
    double y = rng.uniform(0.0, 20.0);
    for (int i = 0; i < 6; ++i) {
      c.points.push_back({rng.uniform(0.0, 500.0), y});
      y += rng.uniform(1.0, 40.0);
    }
    const LaneCurve once = densify(c);
    const LaneCurve twice = densify(once);
    REQUIRE(once.points.size() == twice.points.size());
    for (size_t i = 0; i < once.points.size(); ++i) {
      CHECK(once.points[i].x == twice.points[i].x);
      CHECK(once.points[i].y == twice.points[i].y);
    }
  }
}

TEST_CASE("densify preserves sampling to within half a pixel") {
  // Lane-like polylines: |dx/dy| <= 1 per segment, so the chord between
  // integer rows stays within half a pixel of the original.
  PortableRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    LaneCurve c;
    double y = rng.uniform(0.0, 10.0);
    double x = rng.uniform(50.0, 250.0);
    for (int i = 0; i < 5; ++i) {
      c.points.push_back({x, y});
      const double step = rng.uniform(1.5, 25.0);
      y += step;
      x += rng.uniform(-1.0, 1.0) * step;
    }
    const LaneCurve d = densify(c);
    for (double q = c.points.front().y; q <= c.points.back().y; q += 0.7) {
      const auto orig = sample_x(c, q);
      const auto dens = sample_x(d, q);
      if (!orig || !dens) continue;
      CHECK(std::fabs(*orig - *dens) <= 0.5);
    }
  }
}

TEST_CASE("sample_x interpolates and never extrapolates") {
  const LaneCurve c = make_curve({{100, 190}, {110, 200}});
  CHECK(*sample_x(c, 195) == doctest::Approx(105.0));
  CHECK(!sample_x(c, 189));
  CHECK(!sample_x(c, 200.5));
  CHECK(*sample_x(c, 190) == 100.0);
  CHECK(*sample_x(c, 200) == 110.0);

  const LaneCurve two = make_curve({{50, 10}, {55, 20}, {65, 30}});
  CHECK(*sample_x(two, 25) == doctest::Approx(60.0));
}

TEST_CASE("resample_rows lands on the shared dy grid") {
  const LaneCurve vert = densify(make_curve({{100, 0}, {100, 50}}));
  const LaneCurve r = resample_rows(vert, 10);
  REQUIRE(r.points.size() == 6);
  for (size_t i = 0; i < r.points.size(); ++i) {
    CHECK(r.points[i].y == 10.0 * static_cast<double>(i));
    CHECK(r.points[i].x == 100.0);
  }

  const LaneCurve span = make_curve({{10, 7}, {20, 23}});
  const LaneCurve rs = resample_rows(span, 10);
  REQUIRE(rs.points.size() == 2);
  CHECK(rs.points[0].y == 10.0);
  CHECK(rs.points[1].y == 20.0);

  CHECK_THROWS_AS(resample_rows(span, 0), std::invalid_argument);
}

TEST_CASE("resample_rows outputs strictly increasing grid rows") {
  PortableRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    LaneCurve c;
    double y = rng.uniform(0.0, 30.0);
    for (int i = 0; i < 4; ++i) {
      c.points.push_back({rng.uniform(0.0, 200.0), y});
      y += rng.uniform(10.0, 50.0);
    }
    const int dy = rng.uniform_int(2, 15);
    const LaneCurve r = resample_rows(c, dy);
    for (size_t i = 0; i < r.points.size(); ++i) {
      CHECK(std::fmod(r.points[i].y, dy) == 0.0);
      if (i > 0) CHECK(r.points[i].y > r.points[i - 1].y);
    }
  }
}
