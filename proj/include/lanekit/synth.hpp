#pragma once

#include <cstdint>
#include <vector>

#include "lanekit/encoder.hpp"
#include "lanekit/geometry.hpp"
#include "lanekit/maps.hpp"

namespace lanekit {

enum class CurveFamily { straight, quadratic, cubic };

// Parametric scene generator: lanes are polynomials x = f(y) sampled on
// integer rows, pairwise separated and inside the image, deterministic in
// the seed.
struct SceneSpec {
  ImageSpec image{976, 590};
  int n_lanes = 4;  // 1..5
  CurveFamily family = CurveFamily::quadratic;
  double min_separation = 10.0;  // >= 2*sigma_g of the downstream encoder
  double x_margin = 6.0;
  double top_min = 0.15, top_max = 0.45;       // fractions of image height
  double bottom_min = 0.85, bottom_max = 0.98; // must start above these
  std::uint64_t seed = 0;
  int max_attempts = 1000;

  void validate() const;
};

struct NoiseSpec {
  double score_noise_sd = 0.0;   // additive Gaussian on the score plane
  double offset_noise_sd = 0.0;  // additive Gaussian on offset planes, px
  bool offset_up = true;         // which offset planes receive noise
  bool offset_mid = true;
  bool offset_down = true;
  double dropout_prob = 0.0;     // chance a grid-row keypoint is suppressed
  std::uint64_t seed = 0;

  void validate() const;
};

// Throws InfeasibleSceneError when the constraints cannot be met within
// max_attempts. Lanes come back sorted left-to-right with ids 0..n-1.
std::vector<LaneCurve> gen_scene(const SceneSpec& spec);

// The network output a perfectly trained model would produce: score equals
// the heat target; each offset plane carries the true offset wherever its
// own target row lies in the owning curve's span (within sigma_g of the
// curve), zero elsewhere.
LogitMaps render_ideal(const std::vector<LaneCurve>& curves,
                       const ImageSpec& spec, const EncoderConfig& cfg);

// Deterministic noise channels, applied in a fixed order: dropout sites are
// selected on the clean score plane, then score noise (clamped to [0,1]),
// then dropout zeroes a 3*sigma_h disc around each selected keypoint, then
// per-plane offset noise.
LogitMaps perturb(const LogitMaps& logits, const NoiseSpec& noise,
                  const EncoderConfig& enc);

}  // namespace lanekit
