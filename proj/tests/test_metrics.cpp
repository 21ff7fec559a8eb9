#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lanekit/metrics.hpp"
#include "lanekit/rng.hpp"

using namespace lanekit;

namespace {

LaneCurve sampled_line(double x0, double slope, int y0, int y1, int step,
                       int id = 0) {
  LaneCurve c;
  c.id = id;
  for (int y = y0; y <= y1; y += step)
    c.points.push_back({x0 + slope * y, static_cast<double>(y)});
  return c;
}

LaneCurve shifted(const LaneCurve& c, double dx) {
  LaneCurve out = c;
  for (ImagePoint& p : out.points) p.x += dx;
  return out;
}

// Exhaustive assignment oracle: maximum number of feasible pairs over all
// injective row->column mappings.
int brute_force_best(const std::vector<std::vector<char>>& feasible) {
  const int rows = static_cast<int>(feasible.size());
  const int cols = rows ? static_cast<int>(feasible[0].size()) : 0;
  int best = 0;
  std::vector<int> assign(static_cast<size_t>(rows), -1);
  std::vector<bool> used(static_cast<size_t>(cols), false);
  const auto recurse = [&](auto&& self, int row, int matched) -> void {
    if (row == rows) {
      best = std::max(best, matched);
      return;
    }
    self(self, row + 1, matched);  // leave this row unmatched
    for (int c = 0; c < cols; ++c) {
      if (used[static_cast<size_t>(c)] ||
          !feasible[static_cast<size_t>(row)][static_cast<size_t>(c)])
        continue;
      used[static_cast<size_t>(c)] = true;
      self(self, row + 1, matched + 1);
      used[static_cast<size_t>(c)] = false;
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("point accuracy: identical predictions score perfectly") {
  const std::vector<LaneCurve> gt{sampled_line(300, 0.5, 160, 710, 10, 0),
                                  sampled_line(700, -0.3, 160, 710, 10, 1)};
  const TusimpleReport r = eval_tusimple({gt}, {gt});
  CHECK(r.accuracy == 1.0);
  CHECK(r.fp_rate == 0.0);
  CHECK(r.fn_rate == 0.0);
}

TEST_CASE("point accuracy: a 25 px offset misses the 20 px gate everywhere") {
  const LaneCurve gt = sampled_line(400, 0.0, 160, 710, 10);
  const LaneCurve pred = shifted(gt, 25.0);
  const TusimpleReport r = eval_tusimple({{pred}}, {{gt}});
  CHECK(r.accuracy == 0.0);
  CHECK(r.fp_rate == 1.0);
  CHECK(r.fn_rate == 1.0);
}

TEST_CASE("point accuracy: 9 of 10 rows pass the lane gate") {
  LaneCurve gt = sampled_line(400, 0.0, 100, 190, 10);  // 10 rows
  REQUIRE(gt.points.size() == 10);
  LaneCurve pred = gt;
  pred.points[4].x += 30.0;  // one bad row
  const TusimpleReport r = eval_tusimple({{pred}}, {{gt}});
  CHECK(r.accuracy == doctest::Approx(0.9));
  CHECK(r.fp_rate == 0.0);
  CHECK(r.fn_rate == 0.0);
}

TEST_CASE("aggregates are ratios of sums, not means of ratios") {
  const LaneCurve big = sampled_line(300, 0.0, 100, 490, 10);   // 40 rows
  const LaneCurve small = sampled_line(500, 0.0, 100, 190, 10); // 10 rows
  // image 1: big lane fully correct; image 2: small lane fully missed
  const TusimpleReport r =
      eval_tusimple({{big}, {shifted(small, 25.0)}}, {{big}, {small}});
  CHECK(r.accuracy == doctest::Approx(40.0 / 50.0));
  const double mean_of_ratios = (1.0 + 0.0) / 2.0;
  CHECK(r.accuracy != doctest::Approx(mean_of_ratios));
  CHECK(r.images.size() == 2);
  CHECK(r.images[0].accuracy == 1.0);
  CHECK(r.images[1].accuracy == 0.0);
}

TEST_CASE("rasterized vertical stripe covers width/2 on each side") {
  const ImageSpec spec{200, 100};
  LaneCurve lane;
  lane.points = {{50.0, 0.0}, {50.0, 99.0}};
  const auto mask = rasterize_lane(lane, spec, 30.0);
  for (int y = 10; y < 90; y += 17) {
    int covered = 0;
    for (int x = 0; x < spec.width; ++x)
      covered += mask[static_cast<size_t>(y) * spec.width + x];
    CHECK(covered >= 30);
    CHECK(covered <= 31);
  }
  // brute-force distance oracle on a sample of pixels
  for (int y = 5; y < 95; y += 13)
    for (int x = 20; x < 90; x += 7) {
      const bool inside = std::fabs(x - 50.0) <= 15.0;
      CHECK((mask[static_cast<size_t>(y) * spec.width + x] != 0) == inside);
    }
}

TEST_CASE("width-1 mask equals the densified pixel set") {
  const ImageSpec spec{40, 30};
  LaneCurve lane;
  lane.points = {{7.0, 2.0}, {7.0, 27.0}};
  const auto mask = rasterize_lane(lane, spec, 1.0);
  long set = 0;
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x)
      if (mask[static_cast<size_t>(y) * spec.width + x]) {
        ++set;
        CHECK(x == 7);
        CHECK(y >= 2);
        CHECK(y <= 27);
      }
  CHECK(set == 26);
}

TEST_CASE("rasterization clips at the image border") {
  const ImageSpec spec{60, 50};
  LaneCurve lane;
  lane.points = {{2.0, 0.0}, {2.0, 49.0}};
  const auto mask = rasterize_lane(lane, spec, 30.0);
  CHECK(mask.size() == static_cast<size_t>(spec.pixel_count()));
  CHECK(mask[0] != 0);

  LaneCurve degenerate;
  degenerate.points = {{5.0, 5.0}};
  CHECK_THROWS_AS(rasterize_lane(degenerate, spec, 30.0),
                  std::invalid_argument);
}

TEST_CASE("mask IoU is symmetric and bounded") {
  const ImageSpec spec{120, 80};
  LaneCurve a, b;
  a.points = {{40.0, 0.0}, {40.0, 79.0}};
  b.points = {{55.0, 0.0}, {55.0, 79.0}};
  const auto ma = rasterize_lane(a, spec, 30.0);
  const auto mb = rasterize_lane(b, spec, 30.0);
  const double iou = mask_iou(ma, mb);
  CHECK(iou == mask_iou(mb, ma));
  CHECK(iou > 0.0);
  CHECK(iou < 1.0);
  CHECK(mask_iou(ma, ma) == 1.0);
}

TEST_CASE("mask protocol: identity, disjoint and the one-third overlap") {
  const ImageSpec spec{400, 100};

  std::vector<LaneCurve> four;
  for (int i = 0; i < 4; ++i) {
    LaneCurve c;
    c.id = i;
    c.points = {{60.0 + 90.0 * i, 0.0}, {60.0 + 90.0 * i, 99.0}};
    four.push_back(c);
  }
  const CulaneReport identity = eval_culane({four}, {four}, spec);
  CHECK(identity.tp == 4);
  CHECK(identity.fp == 0);
  CHECK(identity.fn == 0);
  CHECK(identity.f1 == 1.0);

  LaneCurve left, right;
  left.points = {{50.0, 0.0}, {50.0, 99.0}};
  right.points = {{300.0, 0.0}, {300.0, 99.0}};
  const CulaneReport disjoint = eval_culane({{left}}, {{right}}, spec);
  CHECK(disjoint.tp == 0);
  CHECK(disjoint.fp == 1);
  CHECK(disjoint.fn == 1);
  CHECK(disjoint.f1 == 0.0);

  // stripes centered on x.25 offsets cover exactly 30 columns each and
  // share 15: IoU = 15 / 45 = 1/3 < 0.5, so the pair must not match
  LaneCurve a, b;
  a.points = {{50.25, 0.0}, {50.25, 99.0}};
  b.points = {{65.25, 0.0}, {65.25, 99.0}};
  const double iou =
      mask_iou(rasterize_lane(a, spec, 30.0), rasterize_lane(b, spec, 30.0));
  CHECK(iou == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const CulaneReport third = eval_culane({{a}}, {{b}}, spec);
  CHECK(third.tp == 0);
  CHECK(third.fp == 1);
  CHECK(third.fn == 1);
}

TEST_CASE("a spurious prediction cannot help precision or recall") {
  const ImageSpec spec{400, 100};
  LaneCurve gt_lane, far_lane;
  gt_lane.points = {{100.0, 0.0}, {100.0, 99.0}};
  far_lane.points = {{300.0, 0.0}, {300.0, 99.0}};
  const CulaneReport base = eval_culane({{gt_lane}}, {{gt_lane}}, spec);
  const CulaneReport extra =
      eval_culane({{gt_lane, far_lane}}, {{gt_lane}}, spec);
  CHECK(extra.precision <= base.precision);
  CHECK(extra.recall >= base.recall);
}

TEST_CASE("matching equals brute force on every small boolean matrix") {
  for (int rows = 1; rows <= 4; ++rows) {
    for (int cols = 1; cols <= 4; ++cols) {
      const int cells = rows * cols;
      for (int bits = 0; bits < (1 << cells); ++bits) {
        std::vector<std::vector<char>> feasible(
            static_cast<size_t>(rows),
            std::vector<char>(static_cast<size_t>(cols), 0));
        for (int i = 0; i < cells; ++i)
          feasible[static_cast<size_t>(i / cols)]
                  [static_cast<size_t>(i % cols)] =
                      static_cast<char>((bits >> i) & 1);
        const std::vector<int> match = max_bipartite_match(feasible);
        int matched = 0;
        for (int m : match) matched += m >= 0;
        REQUIRE(matched == brute_force_best(feasible));
      }
    }
  }
}
