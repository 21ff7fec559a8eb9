#pragma once

#include <cstdint>
#include <vector>

#include "lanekit/geometry.hpp"

namespace lanekit {

// Point-accuracy protocol: ground truth comes as x per sampled row, a
// prediction matches a lane when enough of those rows agree within
// pt_thresh pixels.
struct TusimpleImageResult {
  long correct_points = 0;
  long gt_points = 0;
  int matched = 0;
  int n_pred = 0;
  int n_gt = 0;
  double accuracy = 0.0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;
};

struct TusimpleReport {
  double accuracy = 0.0;  // ratio of sums over images, not mean of ratios
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  std::vector<TusimpleImageResult> images;
};

TusimpleReport eval_tusimple(const std::vector<std::vector<LaneCurve>>& pred,
                             const std::vector<std::vector<LaneCurve>>& gt,
                             double pt_thresh = 20.0,
                             double match_thresh = 0.85);

// All pixels within width/2 of the densified polyline (round joins and
// caps), clipped to the image. Throws for degenerate lanes.
std::vector<std::uint8_t> rasterize_lane(const LaneCurve& lane,
                                         const ImageSpec& spec,
                                         double width = 30.0);

double mask_iou(const std::vector<std::uint8_t>& a,
                const std::vector<std::uint8_t>& b);

// Mask-IoU protocol: per image, the matching maximizing the number of pairs
// with IoU > iou_thresh (optimal assignment, not greedy); counts aggregate
// over images before precision/recall/F1.
struct CulaneReport {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

CulaneReport eval_culane(const std::vector<std::vector<LaneCurve>>& pred,
                         const std::vector<std::vector<LaneCurve>>& gt,
                         const ImageSpec& spec, double iou_thresh = 0.5,
                         double width = 30.0);

// Maximum-cardinality matching on a boolean feasibility matrix
// (rows = predictions, cols = ground truths). Returns the matched column per
// row, -1 where unmatched. Exposed so tests can pit it against brute force.
std::vector<int> max_bipartite_match(
    const std::vector<std::vector<char>>& feasible);

}  // namespace lanekit
