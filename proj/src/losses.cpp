#include "lanekit/losses.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lanekit {

void LossConfig::validate() const {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (dy < 1) throw std::invalid_argument("dy must be >= 1");
}

std::pair<double, double> penalty_coefficients(double g, double s) {
  if (!(g >= 0.0 && g <= 1.0))
    throw std::invalid_argument("target value g outside [0,1]");
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("score s outside [0,1]");
  if (g == 1.0) return {0.0, s};
  return {g, 1.0 - s};
}

double heatmap_loss(const Plane& score, const Plane& heat,
                    const LossConfig& cfg) {
  cfg.validate();
  if (!score.same_shape(heat))
    throw std::invalid_argument("score and heat planes differ in shape");
  long n_pos = 0;
  double sum = 0.0;
  for (size_t i = 0; i < score.data.size(); ++i) {
    const auto [g_hat, s_hat] =
        penalty_coefficients(heat.data[i], score.data[i]);
    if (heat.data[i] == 1.0) ++n_pos;
    const double s_cl = s_hat < 1e-12 ? 1e-12 : s_hat;
    sum += std::pow(1.0 - g_hat, cfg.beta) * std::pow(1.0 - s_hat, cfg.gamma) *
           std::log(s_cl);
  }
  if (n_pos == 0)
    throw std::invalid_argument(
        "heatmap loss undefined: no positive pixel in target");
  return -sum / static_cast<double>(n_pos);
}

LocalCurve recover_local_curve(const ImagePoint& p, const LogitMaps& logits,
                               int dy) {
  const ImageSpec spec = logits.spec();
  if (!spec.contains(p.x, p.y))
    throw std::invalid_argument("point outside the image");
  const int px = nearest_col(p.x, spec.width);
  const int py = nearest_row(p.y, spec.height);
  return {{p.x + logits.off_up.at(px, py), p.y - dy},
          {p.x + logits.off_mid.at(px, py), p.y},
          {p.x + logits.off_down.at(px, py), p.y + dy}};
}

namespace {

// Visits every supervised pixel together with its owning curve. Ownership
// is recomputed from the curves with the same nearest-in-row rule the
// encoder uses, so it matches the mask by construction.
template <typename Fn>
long for_each_supervised(const GroundTruthMaps& gt,
                         const std::vector<LaneCurve>& curves, Fn&& fn) {
  const ImageSpec spec = gt.heat.spec();
  const std::vector<int> owner = nearest_curve_map(
      curves, spec, std::numeric_limits<double>::infinity());
  long n = 0;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      if (gt.mask.at(x, y) != 1.0) continue;
      const int l = owner[static_cast<size_t>(y) * spec.width + x];
      if (l < 0) continue;  // mask disagrees with curves; skip defensively
      fn(x, y, curves[static_cast<size_t>(l)]);
      ++n;
    }
  }
  return n;
}

void check_shapes(const LogitMaps& logits, const GroundTruthMaps& gt) {
  if (!logits.score.same_shape(gt.heat) ||
      !logits.score.same_shape(gt.mask))
    throw std::invalid_argument("logit and target planes differ in shape");
}

}  // namespace

OffsetLoss offset_loss_updown(const LogitMaps& logits,
                              const GroundTruthMaps& gt,
                              const std::vector<LaneCurve>& curves,
                              const LossConfig& cfg) {
  cfg.validate();
  check_shapes(logits, gt);
  double sum_up = 0.0;
  double sum_down = 0.0;
  const long n = for_each_supervised(
      gt, curves, [&](int x, int y, const LaneCurve& c) {
        const double t_up = *sample_x(c, static_cast<double>(y - cfg.dy));
        const double t_dn = *sample_x(c, static_cast<double>(y + cfg.dy));
        sum_up += std::fabs(x + logits.off_up.at(x, y) - t_up);
        sum_down += std::fabs(x + logits.off_down.at(x, y) - t_dn);
      });
  if (n == 0) return {0.0, 0.0, 0};
  return {sum_up / n, sum_down / n, n};
}

C2fLoss offset_loss_c2f(const LogitMaps& logits, const GroundTruthMaps& gt,
                        const std::vector<LaneCurve>& curves,
                        const LossConfig& cfg) {
  cfg.validate();
  check_shapes(logits, gt);
  const int width = logits.score.width;
  // Coarse points snap to their nearest pixel before the same-row read, and
  // the refinement is applied from that pixel; subpixel interpolation is
  // deliberately not used so training matches the decoder's reads.
  const auto refined_x = [&](double coarse_x, int row) {
    const int qx = nearest_col(coarse_x, width);
    return qx + logits.off_mid.at(qx, row);
  };
  double sum = 0.0;
  const long n = for_each_supervised(
      gt, curves, [&](int x, int y, const LaneCurve& c) {
        const double t_up = *sample_x(c, static_cast<double>(y - cfg.dy));
        const double t_dn = *sample_x(c, static_cast<double>(y + cfg.dy));
        const double coarse_up = x + logits.off_up.at(x, y);
        const double coarse_dn = x + logits.off_down.at(x, y);
        sum += std::fabs(refined_x(coarse_up, y - cfg.dy) - t_up);
        sum += std::fabs(refined_x(coarse_dn, y + cfg.dy) - t_dn);
      });
  if (n == 0) return {0.0, 0};
  return {sum / (2.0 * static_cast<double>(n)), n};
}

LossReport total_loss(const LogitMaps& logits, const GroundTruthMaps& gt,
                      const std::vector<LaneCurve>& curves,
                      const LossConfig& cfg) {
  LossReport report;
  report.heat_loss = heatmap_loss(logits.score, gt.heat, cfg);
  for (double g : gt.heat.data)
    if (g == 1.0) ++report.n_pos;
  const OffsetLoss ud = offset_loss_updown(logits, gt, curves, cfg);
  const C2fLoss c2f = offset_loss_c2f(logits, gt, curves, cfg);
  report.loss_up = ud.up;
  report.loss_down = ud.down;
  report.loss_mid = c2f.mid;
  report.n_supervised = ud.n;
  report.empty_mask = ud.n == 0;
  report.total = report.heat_loss +
                 cfg.lambda * (report.loss_up + report.loss_down +
                               report.loss_mid);
  return report;
}

}  // namespace lanekit
