#include "lanekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanekit {

namespace {

long count_close_rows(const LaneCurve& pred, const LaneCurve& gt,
                      double pt_thresh) {
  long correct = 0;
  for (const ImagePoint& g : gt.points) {
    const auto px = sample_x(pred, g.y);
    if (px && std::fabs(*px - g.x) < pt_thresh) ++correct;
  }
  return correct;
}

}  // namespace

TusimpleReport eval_tusimple(const std::vector<std::vector<LaneCurve>>& pred,
                             const std::vector<std::vector<LaneCurve>>& gt,
                             double pt_thresh, double match_thresh) {
  if (pred.size() != gt.size())
    throw std::invalid_argument("pred/gt image counts differ");
  TusimpleReport report;
  long sum_correct = 0, sum_gt_points = 0;
  long sum_pred = 0, sum_gt = 0, sum_matched = 0;
  for (size_t img = 0; img < gt.size(); ++img) {
    const auto& preds = pred[img];
    const auto& gts = gt[img];
    TusimpleImageResult res;
    res.n_pred = static_cast<int>(preds.size());
    res.n_gt = static_cast<int>(gts.size());

    // correct-row counts for every (pred, gt) pair
    std::vector<std::vector<long>> correct(preds.size(),
                                           std::vector<long>(gts.size(), 0));
    for (size_t p = 0; p < preds.size(); ++p)
      for (size_t g = 0; g < gts.size(); ++g)
        correct[p][g] = count_close_rows(preds[p], gts[g], pt_thresh);

    // Each gt lane takes the best still-unmatched prediction; a failed
    // match (below match_thresh) leaves both sides unmatched.
    std::vector<bool> pred_used(preds.size(), false);
    for (size_t g = 0; g < gts.size(); ++g) {
      const long n_rows = static_cast<long>(gts[g].points.size());
      res.gt_points += n_rows;
      int best = -1;
      long best_correct = -1;
      for (size_t p = 0; p < preds.size(); ++p) {
        if (pred_used[p]) continue;
        if (correct[p][g] > best_correct) {
          best_correct = correct[p][g];
          best = static_cast<int>(p);
        }
      }
      if (best >= 0 &&
          static_cast<double>(best_correct) >= match_thresh * n_rows) {
        pred_used[static_cast<size_t>(best)] = true;
        res.correct_points += best_correct;
        ++res.matched;
      }
    }

    res.accuracy = res.gt_points > 0
                       ? static_cast<double>(res.correct_points) / res.gt_points
                       : 0.0;
    res.fp_rate = res.n_pred > 0
                      ? static_cast<double>(res.n_pred - res.matched) / res.n_pred
                      : 0.0;
    res.fn_rate = res.n_gt > 0
                      ? static_cast<double>(res.n_gt - res.matched) / res.n_gt
                      : 0.0;
    report.images.push_back(res);

    sum_correct += res.correct_points;
    sum_gt_points += res.gt_points;
    sum_pred += res.n_pred;
    sum_gt += res.n_gt;
    sum_matched += res.matched;
  }
  report.accuracy =
      sum_gt_points > 0 ? static_cast<double>(sum_correct) / sum_gt_points : 0.0;
  report.fp_rate =
      sum_pred > 0 ? static_cast<double>(sum_pred - sum_matched) / sum_pred : 0.0;
  report.fn_rate =
      sum_gt > 0 ? static_cast<double>(sum_gt - sum_matched) / sum_gt : 0.0;
  return report;
}

std::vector<std::uint8_t> rasterize_lane(const LaneCurve& lane,
                                         const ImageSpec& spec, double width) {
  if (!(width >= 1.0)) throw std::invalid_argument("mask width must be >= 1");
  if (!spec.valid()) throw std::invalid_argument("image spec is empty");
  const LaneCurve d = densify(lane);  // rejects degenerate lanes
  std::vector<std::uint8_t> mask(static_cast<size_t>(spec.pixel_count()), 0);
  const double r = width / 2.0;
  const double r2 = r * r;
  for (size_t i = 0; i + 1 < d.points.size(); ++i) {
    const ImagePoint& a = d.points[i];
    const ImagePoint& b = d.points[i + 1];
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double len2 = abx * abx + aby * aby;
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - r)));
    const int x1 = std::min(spec.width - 1,
                            static_cast<int>(std::ceil(std::max(a.x, b.x) + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(a.y - r)));
    const int y1 = std::min(spec.height - 1, static_cast<int>(std::ceil(b.y + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        // squared distance from the pixel to segment ab
        double t = len2 > 0.0 ? ((x - a.x) * abx + (y - a.y) * aby) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double dx = x - (a.x + t * abx);
        const double dyv = y - (a.y + t * aby);
        if (dx * dx + dyv * dyv <= r2)
          mask[static_cast<size_t>(y) * spec.width + x] = 1;
      }
    }
  }
  return mask;
}

double mask_iou(const std::vector<std::uint8_t>& a,
                const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("mask sizes differ");
  long inter = 0, uni = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const bool av = a[i] != 0, bv = b[i] != 0;
    inter += av && bv;
    uni += av || bv;
  }
  return uni > 0 ? static_cast<double>(inter) / uni : 0.0;
}

namespace {

bool try_augment(const std::vector<std::vector<char>>& feasible, int row,
                 std::vector<int>& match_col, std::vector<int>& match_row,
                 std::vector<bool>& seen) {
  const int cols = match_col.empty() ? 0 : static_cast<int>(match_col.size());
  for (int c = 0; c < cols; ++c) {
    if (!feasible[static_cast<size_t>(row)][static_cast<size_t>(c)]) continue;
    if (seen[static_cast<size_t>(c)]) continue;
    seen[static_cast<size_t>(c)] = true;
    if (match_col[static_cast<size_t>(c)] < 0 ||
        try_augment(feasible, match_col[static_cast<size_t>(c)], match_col,
                    match_row, seen)) {
      match_col[static_cast<size_t>(c)] = row;
      match_row[static_cast<size_t>(row)] = c;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<int> max_bipartite_match(
    const std::vector<std::vector<char>>& feasible) {
  const int rows = static_cast<int>(feasible.size());
  const int cols = rows > 0 ? static_cast<int>(feasible[0].size()) : 0;
  std::vector<int> match_row(static_cast<size_t>(rows), -1);
  std::vector<int> match_col(static_cast<size_t>(cols), -1);
  for (int r = 0; r < rows; ++r) {
    std::vector<bool> seen(static_cast<size_t>(cols), false);
    try_augment(feasible, r, match_col, match_row, seen);
  }
  return match_row;
}

CulaneReport eval_culane(const std::vector<std::vector<LaneCurve>>& pred,
                         const std::vector<std::vector<LaneCurve>>& gt,
                         const ImageSpec& spec, double iou_thresh,
                         double width) {
  if (pred.size() != gt.size())
    throw std::invalid_argument("pred/gt image counts differ");
  CulaneReport report;
  for (size_t img = 0; img < gt.size(); ++img) {
    const auto& preds = pred[img];
    const auto& gts = gt[img];
    std::vector<std::vector<std::uint8_t>> pred_masks, gt_masks;
    pred_masks.reserve(preds.size());
    gt_masks.reserve(gts.size());
    for (const LaneCurve& lane : preds)
      pred_masks.push_back(rasterize_lane(lane, spec, width));
    for (const LaneCurve& lane : gts)
      gt_masks.push_back(rasterize_lane(lane, spec, width));

    std::vector<std::vector<char>> feasible(
        preds.size(), std::vector<char>(gts.size(), 0));
    for (size_t p = 0; p < preds.size(); ++p)
      for (size_t g = 0; g < gts.size(); ++g)
        feasible[p][g] = mask_iou(pred_masks[p], gt_masks[g]) > iou_thresh;

    const std::vector<int> match = max_bipartite_match(feasible);
    long tp = 0;
    for (int m : match) tp += m >= 0;
    report.tp += tp;
    report.fp += static_cast<long>(preds.size()) - tp;
    report.fn += static_cast<long>(gts.size()) - tp;
  }
  report.precision =
      report.tp + report.fp > 0
          ? static_cast<double>(report.tp) / (report.tp + report.fp)
          : 0.0;
  report.recall = report.tp + report.fn > 0
                      ? static_cast<double>(report.tp) / (report.tp + report.fn)
                      : 0.0;
  report.f1 = report.precision + report.recall > 0.0
                  ? 2.0 * report.precision * report.recall /
                        (report.precision + report.recall)
                  : 0.0;
  return report;
}

}  // namespace lanekit
