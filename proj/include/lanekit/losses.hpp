#pragma once

#include <utility>
#include <vector>

#include "lanekit/encoder.hpp"
#include "lanekit/geometry.hpp"
#include "lanekit/maps.hpp"

namespace lanekit {

struct LossConfig {
  double beta = 4.0;    // penalty reduction near positives
  double gamma = 2.0;   // down-weighting of easy samples
  double lambda = 0.02; // regression weight
  int dy = 10;          // vertical keypoint interval, px

  void validate() const;
};

struct LossReport {
  double heat_loss = 0.0;
  double loss_up = 0.0;
  double loss_down = 0.0;
  double loss_mid = 0.0;
  double total = 0.0;
  long n_pos = 0;        // pixels with heat target exactly 1
  long n_supervised = 0; // pixels contributing to the offset losses
  bool empty_mask = false;
};

// (g_hat, s_hat): zero ambiguity penalty on exact positives, mirrored score
// on negatives. Inputs must both lie in [0,1].
std::pair<double, double> penalty_coefficients(double g, double s);

// Focal-style classification loss over all pixels, normalized by the count
// of exact positives. s_hat is clamped to [1e-12, 1] before the log.
// Accumulation is sequential row-major so results are reproducible.
// Throws std::invalid_argument when the target has no positive pixel.
double heatmap_loss(const Plane& score, const Plane& heat,
                    const LossConfig& cfg);

struct LocalCurve {
  ImagePoint up;
  ImagePoint mid;
  ImagePoint down;
};

// The three neighboring keypoints implied by the offsets at p (read at the
// nearest integer pixel). Throws when p is outside the image.
LocalCurve recover_local_curve(const ImagePoint& p, const LogitMaps& logits,
                               int dy);

struct OffsetLoss {
  double up = 0.0;
  double down = 0.0;
  long n = 0;  // 0 means the supervision mask was empty (warning, not error)
};

// Mean L1 error of the predicted up/down neighbor positions against the
// owning curve, over supervised pixels. The vertical components cancel by
// construction, leaving pure horizontal distances.
OffsetLoss offset_loss_updown(const LogitMaps& logits,
                              const GroundTruthMaps& gt,
                              const std::vector<LaneCurve>& curves,
                              const LossConfig& cfg);

struct C2fLoss {
  double mid = 0.0;
  long n = 0;
};

// Coarse-to-fine loss for the same-row offset: propagate each supervised
// pixel with the predicted up/down offsets, round the coarse point to its
// nearest pixel (clamped to the image border), re-read the same-row offset
// there, and penalize the refined position against the curve.
C2fLoss offset_loss_c2f(const LogitMaps& logits, const GroundTruthMaps& gt,
                        const std::vector<LaneCurve>& curves,
                        const LossConfig& cfg);

LossReport total_loss(const LogitMaps& logits, const GroundTruthMaps& gt,
                      const std::vector<LaneCurve>& curves,
                      const LossConfig& cfg);

}  // namespace lanekit
